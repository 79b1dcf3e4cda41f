// Regenerates the bundled synthetic market data (data/sample_spot.csv,
// data/sample_curve.csv): one simulated path of the curve and spot models,
// written in the CSV schemas the loader expects. Usage: make_sample_data [dir]

#include "gasval/key_value.hpp"
#include "gasval/pipeline.hpp"

#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <numbers>

using namespace gasval;

int main(int argc, char** argv) {
    const std::string dir = argc > 1 ? argv[1] : "data";

    GabillonParams fut;
    fut.lambda = 0.8;
    fut.mu1 = 0.12;
    fut.mu2 = 0.03;
    fut.sigma_s = 0.42;
    fut.sigma_l = 0.16;
    fut.rho = 0.35;

    SpotParams sp;
    sp.model = 1;
    sp.a1 = 0.0;
    sp.a2 = 0.26;
    sp.a3 = 0.45;
    sp.garch = {2e-5, 0.87, 0.11};
    sp.spike_pos.intensity = 0.8;
    sp.spike_pos.jump_mean = 0.26;
    sp.spike_pos.jump_std = 0.39;
    sp.spike_neg.intensity = 2.9;
    sp.spike_neg.jump_mean = -0.76;
    sp.spike_neg.jump_std = 0.64;

    // winter-peaking seasonal curve with a mild upward drift; long enough
    // that a rolling four-year tenor stays quoted through the history
    std::vector<CurvePoint> curve;
    YearMonth m{2023, 1};
    for (int i = 0; i < 96; ++i) {
        const double seasonal = 0.5 * std::cos(2.0 * std::numbers::pi * (m.month - 1) / 12.0);
        curve.push_back({m, 3.2 + seasonal + 0.02 * i / 12.0});
        m = add_months(m, 1);
    }

    const PriceHistory h =
        synthesize_history(fut, sp, curve, 3.1, {2023, 1, 2}, {2026, 7, 1}, 20230102);

    std::filesystem::create_directories(dir);
    std::ofstream spot_out(std::filesystem::path(dir) / "sample_spot.csv", std::ios::binary);
    std::ofstream curve_out(std::filesystem::path(dir) / "sample_curve.csv", std::ios::binary);
    if (!spot_out.good() || !curve_out.good()) {
        std::cerr << "cannot write into '" << dir << "'\n";
        return 1;
    }

    spot_out << "date,price\n";
    curve_out << "date,maturity_month,price\n";
    for (size_t i = 0; i < h.size(); ++i) {
        spot_out << to_string(h.dates[i]) << "," << format_double(h.spot[i]) << "\n";
        for (const CurvePoint& pt : h.curves[i])
            curve_out << to_string(h.dates[i]) << "," << to_string(pt.maturity) << ","
                      << format_double(pt.price) << "\n";
    }
    std::cout << h.size() << " days written to " << dir << "\n";
    return 0;
}
