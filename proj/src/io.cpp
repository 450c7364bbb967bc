// Copyright 2026 The Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "divann/io.hpp"

#include <bit>
#include <cmath>
#include <cstring>
#include <fstream>
#include <iterator>
#include <limits>
#include <sstream>

#include "divann/random.hpp"

namespace divann {

namespace {

constexpr char kMagic[4] = {'D', 'V', 'R', 'S'};
constexpr std::uint32_t kVersion = 1;

class Writer {
 public:
  void u8(std::uint8_t v) { out_.push_back(v); }
  void u16(std::uint16_t v) { put(v, 2); }
  void u32(std::uint32_t v) { put(v, 4); }
  void u64(std::uint64_t v) { put(v, 8); }
  void f32(float v) { u32(std::bit_cast<std::uint32_t>(v)); }
  void f64(double v) { u64(std::bit_cast<std::uint64_t>(v)); }
  void bytes(const char* p, std::size_t n) {
    out_.insert(out_.end(), p, p + n);
  }
  std::vector<std::uint8_t> take() { return std::move(out_); }

 private:
  void put(std::uint64_t v, int width) {
    for (int i = 0; i < width; ++i) out_.push_back(static_cast<std::uint8_t>(v >> (8 * i)));
  }
  std::vector<std::uint8_t> out_;
};

class Reader {
 public:
  Reader(std::span<const std::uint8_t> bytes, std::string what)
      : bytes_(bytes), what_(std::move(what)) {}

  std::uint16_t u16() { return static_cast<std::uint16_t>(get(2)); }
  std::uint32_t u32() { return static_cast<std::uint32_t>(get(4)); }
  std::uint64_t u64() { return get(8); }
  float f32() { return std::bit_cast<float>(u32()); }
  double f64() { return std::bit_cast<double>(u64()); }
  void bytes(char* p, std::size_t n) {
    need(n);
    std::memcpy(p, bytes_.data() + pos_, n);
    pos_ += n;
  }

  std::size_t pos() const { return pos_; }
  std::size_t remaining() const { return bytes_.size() - pos_; }
  [[noreturn]] void fail(const std::string& msg) const {
    throw FormatError(what_ + ": " + msg + " at byte offset " + std::to_string(pos_));
  }
  void need(std::size_t n) const {
    if (remaining() < n) {
      fail("truncated: need " + std::to_string(n) + " bytes, have " +
           std::to_string(remaining()));
    }
  }
  void finish() const {
    if (remaining() != 0) fail(std::to_string(remaining()) + " trailing bytes");
  }

 private:
  std::uint64_t get(int width) {
    need(static_cast<std::size_t>(width));
    std::uint64_t v = 0;
    for (int i = 0; i < width; ++i) {
      v |= static_cast<std::uint64_t>(bytes_[pos_ + static_cast<std::size_t>(i)]) << (8 * i);
    }
    pos_ += static_cast<std::size_t>(width);
    return v;
  }

  std::span<const std::uint8_t> bytes_;
  std::string what_;
  std::size_t pos_ = 0;
};

bool ends_with(const std::string& s, const std::string& suffix) {
  return s.size() >= suffix.size() &&
         s.compare(s.size() - suffix.size(), suffix.size(), suffix) == 0;
}

std::uint32_t opt_u32(const std::optional<std::uint32_t>& v) {
  return v ? *v : kAbsent;
}

std::optional<std::uint32_t> u32_opt(std::uint32_t v) {
  if (v == kAbsent) return std::nullopt;
  return v;
}

}  // namespace

std::vector<std::uint8_t> read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path + " for reading");
  std::vector<std::uint8_t> bytes((std::istreambuf_iterator<char>(in)),
                                  std::istreambuf_iterator<char>());
  if (in.bad()) throw IoError("read failed for " + path);
  return bytes;
}

void write_file(const std::string& path, std::span<const std::uint8_t> bytes) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open " + path + " for writing");
  out.write(reinterpret_cast<const char*>(bytes.data()),
            static_cast<std::streamsize>(bytes.size()));
  if (!out) throw IoError("write failed for " + path);
}

VectorSet load_fvecs(const std::string& path) {
  const auto bytes = read_file(path);
  Reader r(bytes, path);
  if (bytes.empty()) r.fail("empty fvecs file");
  std::size_t dim = 0;
  std::vector<float> data;
  for (std::size_t record = 0; r.remaining() > 0; ++record) {
    const std::uint32_t d = r.u32();
    if (d == 0) r.fail("record " + std::to_string(record) + " has zero dimension");
    if (record == 0) {
      dim = d;
      data.reserve(bytes.size() / (4 + 4 * static_cast<std::size_t>(d)) * d);
    } else if (d != dim) {
      r.fail("record " + std::to_string(record) + " has dimension " +
             std::to_string(d) + ", expected " + std::to_string(dim));
    }
    r.need(4 * static_cast<std::size_t>(d));
    for (std::uint32_t j = 0; j < d; ++j) {
      const float x = r.f32();
      if (!std::isfinite(x)) {
        r.fail("record " + std::to_string(record) + " has a non-finite coordinate");
      }
      data.push_back(x);
    }
  }
  return VectorSet(dim, std::move(data));
}

void save_fvecs(const VectorSet& vectors, const std::string& path) {
  Writer w;
  for (std::size_t i = 0; i < vectors.size(); ++i) {
    w.u32(static_cast<std::uint32_t>(vectors.dim()));
    for (float x : vectors.row(i)) w.f32(x);
  }
  write_file(path, w.take());
}

std::vector<Color> load_colors(const std::string& path, std::size_t n) {
  std::vector<Color> colors;
  if (ends_with(path, ".txt")) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open " + path + " for reading");
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
      ++line_no;
      if (line.empty()) continue;
      std::istringstream parse(line);
      unsigned long long v = 0;
      std::string rest;
      if (!(parse >> v) || (parse >> rest) ||
          v > std::numeric_limits<Color>::max()) {
        throw FormatError(path + ": line " + std::to_string(line_no) +
                          " is not a color id");
      }
      colors.push_back(static_cast<Color>(v));
    }
  } else {
    const auto bytes = read_file(path);
    if (bytes.size() % 4 != 0) {
      throw FormatError(path + ": size " + std::to_string(bytes.size()) +
                        " is not a multiple of 4");
    }
    Reader r(bytes, path);
    colors.resize(bytes.size() / 4);
    for (auto& c : colors) c = r.u32();
  }
  if (colors.size() != n) {
    throw FormatError(path + ": holds " + std::to_string(colors.size()) +
                      " colors, expected " + std::to_string(n));
  }
  return colors;
}

void save_colors(std::span<const Color> colors, const std::string& path) {
  if (ends_with(path, ".txt")) {
    std::ofstream out(path, std::ios::trunc);
    if (!out) throw IoError("cannot open " + path + " for writing");
    for (Color c : colors) out << c << '\n';
    if (!out) throw IoError("write failed for " + path);
    return;
  }
  Writer w;
  for (Color c : colors) w.u32(c);
  write_file(path, w.take());
}

std::vector<ColorTier> arxiv_color_scheme() {
  return {ColorTier{1, 3, 0.9}, ColorTier{4, 1000, 0.1}};
}

std::vector<ColorTier> sift_skewed_color_scheme() {
  return {ColorTier{0, 0, 0.8}, ColorTier{1, 999, 0.2}};
}

std::vector<Color> gen_colors_skewed(std::size_t n,
                                     std::span<const ColorTier> tiers,
                                     std::uint64_t seed) {
  if (tiers.empty()) throw UsageError("color scheme needs at least one tier");
  double total = 0.0;
  for (const ColorTier& t : tiers) {
    if (!(t.prob >= 0.0) || t.lo > t.hi) {
      throw UsageError("color tier needs prob >= 0 and lo <= hi");
    }
    total += t.prob;
  }
  if (std::abs(total - 1.0) > 1e-9) {
    throw UsageError("color tier probabilities sum to " + std::to_string(total) +
                     ", not 1");
  }
  Rng rng(seed);
  std::vector<Color> colors(n);
  for (auto& c : colors) {
    const double u = rng.uniform();
    std::size_t t = 0;
    double acc = tiers[0].prob;
    while (u >= acc && t + 1 < tiers.size()) acc += tiers[++t].prob;
    const ColorTier& tier = tiers[t];
    c = tier.lo + static_cast<Color>(
                      rng.below(static_cast<std::uint64_t>(tier.hi - tier.lo) + 1));
  }
  return colors;
}

std::vector<Color> gen_colors_hyperplane(const VectorSet& vectors,
                                         std::size_t buckets,
                                         double primary_prob, std::uint64_t seed) {
  if (buckets < 2) throw UsageError("hyperplane coloring needs >= 2 buckets");
  if (!(primary_prob >= 0.0 && primary_prob <= 1.0)) {
    throw UsageError("primary probability must lie in [0, 1]");
  }
  std::size_t bits = 0;
  while ((std::size_t{1} << bits) < buckets) ++bits;
  const std::size_t total = std::size_t{1} << bits;
  const std::size_t dim = vectors.dim();
  const std::size_t n = vectors.size();

  std::vector<double> mean(dim, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < dim; ++j) mean[j] += vectors.row_ptr(i)[j];
  }
  for (double& m : mean) m /= static_cast<double>(std::max<std::size_t>(n, 1));

  Rng rng(seed);
  std::vector<double> normals(bits * dim);
  for (double& x : normals) x = rng.normal();

  std::vector<Color> colors(n);
  for (std::size_t i = 0; i < n; ++i) {
    const float* x = vectors.row_ptr(i);
    std::size_t bucket = 0;
    for (std::size_t b = 0; b < bits; ++b) {
      double dot = 0.0;
      for (std::size_t j = 0; j < dim; ++j) dot += normals[b * dim + j] * (x[j] - mean[j]);
      if (dot >= 0.0) bucket |= std::size_t{1} << b;
    }
    const double u = rng.uniform();
    if (u < primary_prob) {
      colors[i] = static_cast<Color>(bucket);
    } else {
      std::size_t c = rng.below(total - 1);
      if (c >= bucket) ++c;
      colors[i] = static_cast<Color>(c);
    }
  }
  return colors;
}

VectorSet gen_gaussian_mixture(std::size_t n, std::size_t dim,
                               std::size_t centers, double spread,
                               std::uint64_t center_seed, std::uint64_t seed) {
  if (dim == 0 || centers == 0) throw UsageError("need dim > 0 and centers > 0");
  if (!(spread >= 0.0)) throw UsageError("spread must be >= 0");
  Rng center_rng(center_seed);
  std::vector<double> mu(centers * dim);
  for (double& x : mu) x = center_rng.normal();
  Rng rng(seed);
  std::vector<float> data(n * dim);
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t c = rng.below(centers);
    for (std::size_t j = 0; j < dim; ++j) {
      data[i * dim + j] = static_cast<float>(mu[c * dim + j] + spread * rng.normal());
    }
  }
  return VectorSet(dim, std::move(data));
}

std::vector<std::uint8_t> encode_index(const DiverseGraph& graph,
                                       std::span<const Color> colors,
                                       std::uint32_t dim) {
  if (colors.size() != graph.size()) {
    throw UsageError("index has " + std::to_string(graph.size()) + " nodes but " +
                     std::to_string(colors.size()) + " colors");
  }
  const GraphMeta& meta = graph.meta();
  Writer w;
  w.bytes(kMagic, 4);
  w.u32(kVersion);
  w.u32(static_cast<std::uint32_t>(meta.builder));
  w.u32(static_cast<std::uint32_t>(meta.rho));
  w.f64(meta.alpha);
  w.u32(meta.k);
  w.u32(meta.k_prime);
  w.u32(opt_u32(meta.degree_cap));
  w.u32(meta.build_list_size);
  w.u32(opt_u32(meta.m));
  w.u32(meta.passes);
  w.u64(meta.seed);
  w.u32(meta.start_node ? *meta.start_node : kAbsent);
  w.u64(graph.size());
  w.u32(dim);
  std::uint64_t offset = 0;
  w.u64(offset);
  for (const auto& nb : graph.adjacency()) {
    offset += nb.size();
    w.u64(offset);
  }
  for (const auto& nb : graph.adjacency()) {
    for (PointId v : nb) w.u32(v);
  }
  for (Color c : colors) w.u32(c);
  return w.take();
}

IndexSnapshot decode_index(std::span<const std::uint8_t> bytes) {
  Reader r(bytes, "index");
  char magic[4];
  r.bytes(magic, 4);
  if (std::memcmp(magic, kMagic, 4) != 0) r.fail("bad magic");
  const std::uint32_t version = r.u32();
  if (version != kVersion) r.fail("unsupported version " + std::to_string(version));

  GraphMeta meta;
  const std::uint32_t builder = r.u32();
  if (builder > static_cast<std::uint32_t>(BuilderTag::kFast)) r.fail("bad builder tag");
  meta.builder = static_cast<BuilderTag>(builder);
  const std::uint32_t rho = r.u32();
  if (rho > static_cast<std::uint32_t>(RhoMode::kEuclidean)) r.fail("bad rho mode");
  meta.rho = static_cast<RhoMode>(rho);
  meta.alpha = r.f64();
  meta.k = r.u32();
  meta.k_prime = r.u32();
  meta.degree_cap = u32_opt(r.u32());
  meta.build_list_size = r.u32();
  meta.m = u32_opt(r.u32());
  meta.passes = r.u32();
  meta.seed = r.u64();
  meta.start_node = u32_opt(r.u32());
  const std::uint64_t n = r.u64();
  const std::uint32_t dim = r.u32();
  if (n >= kAbsent) r.fail("node count too large");
  r.need((n + 1) * 8);
  if (meta.start_node && *meta.start_node >= n) r.fail("start node out of range");

  std::vector<std::uint64_t> offsets(n + 1);
  for (auto& o : offsets) o = r.u64();
  if (offsets[0] != 0) r.fail("first offset is not zero");
  for (std::uint64_t i = 1; i <= n; ++i) {
    if (offsets[i] < offsets[i - 1]) r.fail("offsets not monotone at node " + std::to_string(i - 1));
  }
  r.need(offsets[n] * 4 + n * 4);
  std::vector<std::vector<PointId>> adjacency(n);
  for (std::uint64_t i = 0; i < n; ++i) {
    auto& nb = adjacency[i];
    nb.resize(offsets[i + 1] - offsets[i]);
    for (auto& v : nb) {
      v = r.u32();
      if (v >= n) r.fail("neighbor id " + std::to_string(v) + " out of range");
    }
  }
  IndexSnapshot snap;
  snap.colors.resize(n);
  for (auto& c : snap.colors) c = r.u32();
  r.finish();
  snap.graph = DiverseGraph(std::move(adjacency), meta);
  snap.dim = dim;
  return snap;
}

void save_index(const DiverseGraph& graph, std::span<const Color> colors,
                std::uint32_t dim, const std::string& path) {
  write_file(path, encode_index(graph, colors, dim));
}

IndexSnapshot load_index(const std::string& path) {
  const auto bytes = read_file(path);
  try {
    return decode_index(bytes);
  } catch (const FormatError& e) {
    throw FormatError(path + ": " + e.what());
  }
}

std::vector<std::uint8_t> encode_gt(const GroundTruth& truth) {
  if (truth.k > 0xFFFF || truth.k_prime > 0xFFFF) {
    throw UsageError("ground truth k and k' must fit in 16 bits");
  }
  Writer w;
  w.u32(static_cast<std::uint32_t>(truth.lists.size()));
  w.u16(static_cast<std::uint16_t>(truth.k));
  w.u16(static_cast<std::uint16_t>(truth.k_prime));
  for (const auto& list : truth.lists) {
    if (list.size() > truth.k) throw UsageError("ground truth list longer than k");
    for (std::size_t i = 0; i < truth.k; ++i) {
      w.u32(i < list.size() ? list[i].id : kAbsent);
    }
    for (std::size_t i = 0; i < truth.k; ++i) {
      w.f32(i < list.size() ? static_cast<float>(list[i].distance)
                            : std::numeric_limits<float>::infinity());
    }
  }
  return w.take();
}

GroundTruth decode_gt(std::span<const std::uint8_t> bytes) {
  Reader r(bytes, "ground truth");
  GroundTruth truth;
  const std::uint32_t queries = r.u32();
  truth.k = r.u16();
  truth.k_prime = r.u16();
  r.need(static_cast<std::size_t>(queries) * truth.k * 8);
  truth.lists.resize(queries);
  std::vector<PointId> ids(truth.k);
  for (auto& list : truth.lists) {
    std::size_t used = 0;
    for (std::size_t i = 0; i < truth.k; ++i) {
      ids[i] = r.u32();
      if (ids[i] == kAbsent) continue;
      if (used != i) r.fail("id after an unused slot");
      ++used;
    }
    list.resize(used);
    for (std::size_t i = 0; i < truth.k; ++i) {
      const float d = r.f32();
      if (i < used) list[i] = Hit{ids[i], d};
    }
  }
  r.finish();
  return truth;
}

void save_gt(const GroundTruth& truth, const std::string& path) {
  write_file(path, encode_gt(truth));
}

GroundTruth load_gt(const std::string& path) {
  const auto bytes = read_file(path);
  try {
    return decode_gt(bytes);
  } catch (const FormatError& e) {
    throw FormatError(path + ": " + e.what());
  }
}

}  // namespace divann
