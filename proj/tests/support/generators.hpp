#pragma once

#include "flexitex/syntax.hpp"

#include <random>
#include <string>

namespace flexitex::testing {

using Rng = std::mt19937_64;

/// Uniformly random bytes, biased towards TeX-significant characters.
std::string random_tex_bytes(Rng& rng, std::size_t max_length);
/// The tokens of a real sTeX listing, shuffled and partially dropped.
std::string shuffled_listing(Rng& rng);
/// A random edit valid for `source`; biased towards small local edits.
Edit random_edit(Rng& rng, std::string_view source);

}  // namespace flexitex::testing
