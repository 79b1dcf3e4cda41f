#pragma once

#include "gasval/futures_model.hpp"
#include "gasval/key_value.hpp"
#include "gasval/spot_model.hpp"
#include "gasval/storage.hpp"

#include <string>
#include <utility>
#include <vector>

namespace gasval {

// Flat key/value images of the model parameter structs. Writers emit a fixed
// key order so equal structs produce byte-identical files; readers take the
// parsed map and ignore keys they do not own, so fit metadata can live next
// to the plain parameters in one file.

using KeyValuePairs = std::vector<std::pair<std::string, std::string>>;

KeyValuePairs gabillon_to_pairs(const GabillonParams& p);
GabillonParams gabillon_from_kv(const KeyValueMap& kv);

// Appends objective, covariance and Wald intervals after the parameter keys;
// the result still reads back through gabillon_from_kv.
KeyValuePairs gabillon_fit_to_pairs(const GabillonFit& fit);

KeyValuePairs spot_to_pairs(const SpotParams& p);
SpotParams spot_from_kv(const KeyValueMap& kv);

// Parameter keys plus loglik, sample sizes and the 6x6 covariance needed to
// rebuild an estimate for family generation.
KeyValuePairs spot_estimate_to_pairs(const SpotEstimate& est);
SpotEstimate spot_estimate_from_kv(const KeyValueMap& kv);

KeyValuePairs storage_to_pairs(const StorageSpec& s);
StorageSpec storage_from_kv(const KeyValueMap& kv);

} // namespace gasval
