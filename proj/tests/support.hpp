#pragma once

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iterator>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "osr/activation_set.hpp"
#include "osr/error.hpp"

namespace osr::test {

/// Code of the osr::Error thrown by f, or nullopt if nothing was thrown.
template <typename F>
std::optional<ErrorCode> error_of(F&& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  return std::nullopt;
}

/// Fresh, empty directory under the system temp dir.
inline std::filesystem::path scratch_dir(const std::string& name) {
  auto dir = std::filesystem::temp_directory_path() / ("osr_test_" + name);
  std::filesystem::remove_all(dir);
  std::filesystem::create_directories(dir);
  return dir;
}

inline std::string slurp(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

inline std::vector<double> random_vector(std::mt19937_64& gen, std::size_t n, double lo, double hi) {
  std::uniform_real_distribution<double> u(lo, hi);
  std::vector<double> v(n);
  for (auto& x : v) x = u(gen);
  return v;
}

/// Gaussian blobs: class j centred at `sep` on column j.
inline ActivationSet blobs(std::mt19937_64& gen, std::size_t k, std::size_t per_class, double sep,
                           double sigma = 1.0) {
  std::normal_distribution<double> noise(0.0, sigma);
  std::vector<float> acts;
  std::vector<std::int32_t> labels;
  for (std::size_t j = 0; j < k; ++j) {
    for (std::size_t r = 0; r < per_class; ++r) {
      for (std::size_t c = 0; c < k; ++c) {
        acts.push_back(static_cast<float>((c == j ? sep : 0.0) + noise(gen)));
      }
      labels.push_back(static_cast<std::int32_t>(j));
    }
  }
  return ActivationSet(k, std::move(acts), std::move(labels));
}

}  // namespace osr::test
