#include "osr/data.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <fstream>
#include <iterator>
#include <numeric>
#include <sstream>

#include "osr/error.hpp"
#include "osr/rng.hpp"

namespace osr {

namespace {

void put_u32(std::vector<std::uint8_t>& out, std::uint32_t v) {
  for (int i = 0; i < 4; ++i) out.push_back(static_cast<std::uint8_t>(v >> (8 * i)));
}

std::uint32_t get_u32(std::span<const std::uint8_t> in, std::size_t at) {
  std::uint32_t v = 0;
  for (int i = 0; i < 4; ++i) v |= static_cast<std::uint32_t>(in[at + static_cast<std::size_t>(i)]) << (8 * i);
  return v;
}

}  // namespace

std::vector<std::uint8_t> encode_osav(const ActivationSet& set) {
  const auto n = set.rows();
  const auto k = set.num_classes();
  std::vector<std::uint8_t> out;
  out.reserve(kOsavHeaderSize + 4 * n * k + 4 * n);
  out.insert(out.end(), {'O', 'S', 'A', 'V', kOsavVersion, 0});
  put_u32(out, static_cast<std::uint32_t>(n));
  put_u32(out, static_cast<std::uint32_t>(k));
  for (float v : set.activations()) put_u32(out, std::bit_cast<std::uint32_t>(v));
  for (std::int32_t l : set.labels()) put_u32(out, static_cast<std::uint32_t>(l));
  return out;
}

ActivationSet decode_osav(std::span<const std::uint8_t> bytes) {
  if (bytes.size() < 4 || !std::equal(bytes.begin(), bytes.begin() + 4, "OSAV")) {
    throw Error(ErrorCode::kBadMagic, "not an OSAV file (bad magic)");
  }
  if (bytes.size() < kOsavHeaderSize) {
    throw Error(ErrorCode::kTruncatedFile, "OSAV header is truncated");
  }
  if (bytes[4] != kOsavVersion) {
    throw Error(ErrorCode::kUnsupportedVersion,
                "unsupported OSAV version " + std::to_string(bytes[4]));
  }
  const std::uint64_t n = get_u32(bytes, 6);
  const std::uint64_t k = get_u32(bytes, 10);
  const std::uint64_t expected = kOsavHeaderSize + 4 * n * k + 4 * n;
  if (bytes.size() != expected) {
    std::ostringstream msg;
    msg << "OSAV header declares N = " << n << ", K = " << k << " (" << expected
        << " bytes) but the file has " << bytes.size() << " bytes";
    throw Error(ErrorCode::kTruncatedFile, msg.str());
  }

  std::vector<float> acts(n * k);
  std::size_t at = kOsavHeaderSize;
  for (auto& v : acts) {
    v = std::bit_cast<float>(get_u32(bytes, at));
    if (!std::isfinite(v)) throw Error(ErrorCode::kNonFiniteValue, "OSAV activation is not finite");
    at += 4;
  }
  std::vector<std::int32_t> labels(n);
  for (auto& l : labels) {
    l = static_cast<std::int32_t>(get_u32(bytes, at));
    if (l < kUnknownLabel) {
      throw Error(ErrorCode::kLabelOutOfRange, "OSAV label " + std::to_string(l) + " is below -1");
    }
    at += 4;
  }
  return ActivationSet(k, std::move(acts), std::move(labels));
}

ActivationSet read_activations(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::kIo, "cannot open " + path.string());
  std::vector<std::uint8_t> bytes((std::istreambuf_iterator<char>(in)),
                                  std::istreambuf_iterator<char>());
  return decode_osav(bytes);
}

void write_activations(const ActivationSet& set, const std::filesystem::path& path) {
  const auto bytes = encode_osav(set);
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorCode::kIo, "cannot write " + path.string());
  out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
  if (!out) throw Error(ErrorCode::kIo, "write failed for " + path.string());
}

std::map<std::int32_t, std::int32_t> OpenSplit::relabel_map() const {
  std::map<std::int32_t, std::int32_t> m;
  for (std::size_t i = 0; i < known_classes.size(); ++i) {
    m.emplace(known_classes[i], static_cast<std::int32_t>(i));
  }
  return m;
}

std::int32_t OpenSplit::relabel(std::int32_t original) const {
  const auto it = std::lower_bound(known_classes.begin(), known_classes.end(), original);
  if (it != known_classes.end() && *it == original) {
    return static_cast<std::int32_t>(it - known_classes.begin());
  }
  if (std::find(unknown_classes.begin(), unknown_classes.end(), original) != unknown_classes.end()) {
    return kUnknownLabel;
  }
  throw Error(ErrorCode::kUnknownLabel,
              "label " + std::to_string(original) + " is not part of the split");
}

OpenSplit make_open_split(std::size_t num_total_classes, std::size_t num_known,
                          std::uint64_t seed) {
  if (num_known < 2 || num_known >= num_total_classes) {
    std::ostringstream msg;
    msg << "invalid split: need 2 <= known (" << num_known << ") < total (" << num_total_classes
        << ")";
    throw Error(ErrorCode::kInvalidSplit, msg.str());
  }
  std::vector<std::int32_t> ids(num_total_classes);
  std::iota(ids.begin(), ids.end(), 0);
  SplitMix64 rng(seed);
  for (std::size_t i = 0; i < num_known; ++i) {
    const auto j = i + static_cast<std::size_t>(rng.uniform_below(num_total_classes - i));
    std::swap(ids[i], ids[j]);
  }
  OpenSplit split;
  split.num_total_classes = num_total_classes;
  split.seed = seed;
  split.known_classes.assign(ids.begin(), ids.begin() + static_cast<std::ptrdiff_t>(num_known));
  split.unknown_classes.assign(ids.begin() + static_cast<std::ptrdiff_t>(num_known), ids.end());
  std::sort(split.known_classes.begin(), split.known_classes.end());
  std::sort(split.unknown_classes.begin(), split.unknown_classes.end());
  return split;
}

ActivationSet apply_split(const ActivationSet& set, const OpenSplit& split) {
  std::vector<std::int32_t> labels(set.rows());
  for (std::size_t i = 0; i < set.rows(); ++i) labels[i] = split.relabel(set.labels()[i]);
  ActivationSet out = set;
  out.set_labels(std::move(labels));
  return out;
}

void SyntheticSpec::validate() const {
  const auto fail = [](const std::string& what) { throw Error(ErrorCode::kInvalidArgument, what); };
  if (num_known < 2) fail("synthetic spec needs at least 2 known classes");
  if (dim != num_known) fail("synthetic activation dimension must equal the number of known classes");
  if (samples_per_class == 0) fail("samples_per_class must be positive");
  if (unknown_count == 0) fail("unknown_count must be positive");
  if (!(class_separation > 0.0)) fail("class_separation must be positive");
  if (!(noise_sigma > 0.0)) fail("noise_sigma must be positive");
  if (!std::isfinite(unknown_offset)) fail("unknown_offset must be finite");
}

SyntheticData generate_synthetic(const SyntheticSpec& spec) {
  spec.validate();
  const auto k = spec.num_known;
  const auto u = spec.unknown_count;
  const auto n = spec.samples_per_class;

  SyntheticData data;
  data.split = make_open_split(k + u, k, spec.seed);
  SplitMix64 rng(spec.seed + 1);

  std::vector<std::vector<double>> unknown_centres(u, std::vector<double>(k));
  for (auto& centre : unknown_centres) {
    double norm = 0.0;
    for (auto& c : centre) {
      c = rng.gaussian();
      norm += c * c;
    }
    norm = std::sqrt(norm);
    for (auto& c : centre) c = spec.class_separation / static_cast<double>(k) + spec.unknown_offset * c / norm;
  }

  const auto draw_known = [&](std::vector<float>& acts, std::vector<std::int32_t>& labels) {
    for (std::size_t j = 0; j < k; ++j) {
      for (std::size_t r = 0; r < n; ++r) {
        for (std::size_t c = 0; c < k; ++c) {
          const double centre = c == j ? spec.class_separation : 0.0;
          acts.push_back(static_cast<float>(centre + spec.noise_sigma * rng.gaussian()));
        }
        labels.push_back(data.split.known_classes[j]);
      }
    }
  };

  std::vector<float> train_acts;
  std::vector<std::int32_t> train_labels;
  draw_known(train_acts, train_labels);

  std::vector<float> test_acts;
  std::vector<std::int32_t> test_labels;
  draw_known(test_acts, test_labels);
  for (std::size_t c = 0; c < u; ++c) {
    for (std::size_t r = 0; r < n; ++r) {
      for (std::size_t d = 0; d < k; ++d) {
        test_acts.push_back(
            static_cast<float>(unknown_centres[c][d] + spec.noise_sigma * rng.gaussian()));
      }
      test_labels.push_back(data.split.unknown_classes[c]);
    }
  }

  data.train = ActivationSet(k, std::move(train_acts), std::move(train_labels));
  data.test = ActivationSet(k, std::move(test_acts), std::move(test_labels));
  return data;
}

}  // namespace osr
