#pragma once

#include <sstream>
#include <stdexcept>
#include <string>

namespace gasval {

enum class ErrorKind {
    parse,
    ordering,
    empty_input,
    insufficient_data,
    insufficient_curve,
    domain,
    grid,
    gap,
    singular_matrix,
    convergence,
    infeasible,
    family_construction,
    config,
    io,
};

inline const char* to_string(ErrorKind k) {
    switch (k) {
    case ErrorKind::parse: return "parse";
    case ErrorKind::ordering: return "ordering";
    case ErrorKind::empty_input: return "empty_input";
    case ErrorKind::insufficient_data: return "insufficient_data";
    case ErrorKind::insufficient_curve: return "insufficient_curve";
    case ErrorKind::domain: return "domain";
    case ErrorKind::grid: return "grid";
    case ErrorKind::gap: return "gap";
    case ErrorKind::singular_matrix: return "singular_matrix";
    case ErrorKind::convergence: return "convergence";
    case ErrorKind::infeasible: return "infeasible";
    case ErrorKind::family_construction: return "family_construction";
    case ErrorKind::config: return "config";
    case ErrorKind::io: return "io";
    }
    return "unknown";
}

class Error : public std::runtime_error {
  public:
    Error(ErrorKind kind, const std::string& msg) : std::runtime_error(msg), kind_(kind) {}
    ErrorKind kind() const { return kind_; }

  private:
    ErrorKind kind_;
};

#define GASVAL_REQUIRE(cond, kind, msg)                                                            \
    do {                                                                                           \
        if (!(cond)) {                                                                             \
            std::ostringstream gasval_req_ss_;                                                     \
            gasval_req_ss_ << msg;                                                                 \
            throw ::gasval::Error(kind, gasval_req_ss_.str());                                     \
        }                                                                                          \
    } while (false)

} // namespace gasval
