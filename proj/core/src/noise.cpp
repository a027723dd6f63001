#include "smaxwell/noise.hpp"

#include <bit>
#include <cmath>
#include <cstring>
#include <fstream>
#include <numbers>
#include <stdexcept>
#include <string>

namespace smaxwell {

BasisTables precompute_basis(const Grid& grid, std::size_t modes) {
  if (modes < 1) throw std::invalid_argument("noise truncation level M must be >= 1");
  BasisTables t;
  t.modes = modes;
  t.extents = grid.counts();
  for (Axis axis : kAxes) {
    const std::size_t n = grid.count(axis);
    auto& table = t.sines[axis_index(axis)];
    table.resize(modes * n);
    for (std::size_t m = 1; m <= modes; ++m) {
      for (std::size_t i = 0; i < n; ++i) {
        table[(m - 1) * n + i] = std::sin(static_cast<double>(m) * std::numbers::pi * grid.node(axis, i));
      }
    }
  }
  t.eta.resize(modes * modes * modes);
  for (std::size_t m = 1; m <= modes; ++m) {
    for (std::size_t l = 1; l <= modes; ++l) {
      for (std::size_t q = 1; q <= modes; ++q) {
        const double cubes = static_cast<double>(m * m * m + l * l * l + q * q * q);
        t.eta[((m - 1) * modes + (l - 1)) * modes + (q - 1)] = 1.0 / std::sqrt(cubes);
      }
    }
  }
  return t;
}

double increment_variance(const BasisTables& t, double tau, std::size_t i, std::size_t j, std::size_t k) {
  double sum = 0.0;
  for (std::size_t m = 1; m <= t.modes; ++m) {
    const double sx = t.sine(Axis::x, m, i);
    for (std::size_t l = 1; l <= t.modes; ++l) {
      const double sy = t.sine(Axis::y, l, j);
      for (std::size_t q = 1; q <= t.modes; ++q) {
        const double sz = t.sine(Axis::z, q, k);
        const double w = t.coefficient(m, l, q) * sx * sy * sz;
        sum += w * w;
      }
    }
  }
  return 8.0 * tau * sum;
}

NoiseRng::NoiseRng(std::uint64_t seed, std::uint64_t path_id) : seed_(seed), path_id_(path_id) { seek(0); }

void NoiseRng::seek(std::uint64_t step) {
  auto lo = [](std::uint64_t v) { return static_cast<std::uint32_t>(v & 0xffffffffu); };
  auto hi = [](std::uint64_t v) { return static_cast<std::uint32_t>(v >> 32); };
  std::seed_seq seq{lo(seed_), hi(seed_), lo(path_id_), hi(path_id_), lo(step), hi(step)};
  engine_.seed(seq);
  normal_.reset();
}

Lattice assemble_increment(const BasisTables& t, double tau, std::span<const double> xi) {
  const std::size_t M = t.modes;
  if (xi.size() != M * M * M) {
    throw std::invalid_argument("expected " + std::to_string(M * M * M) + " mode weights, got " +
                                std::to_string(xi.size()));
  }
  if (!(tau >= 0.0)) throw std::invalid_argument("tau must be non-negative");
  const auto [I, J, K] = t.extents;
  const auto& sx = t.sines[0];
  const auto& sy = t.sines[1];
  const auto& sz = t.sines[2];

  // stage 1: contract q against z
  std::vector<double> t1(M * M * K, 0.0);
  for (std::size_t ml = 0; ml < M * M; ++ml) {
    for (std::size_t q = 0; q < M; ++q) {
      const double w = t.eta[ml * M + q] * xi[ml * M + q];
      for (std::size_t k = 0; k < K; ++k) t1[ml * K + k] += w * sz[q * K + k];
    }
  }
  // stage 2: contract l against y
  std::vector<double> t2(M * J * K, 0.0);
  for (std::size_t m = 0; m < M; ++m) {
    for (std::size_t l = 0; l < M; ++l) {
      const double* row = &t1[(m * M + l) * K];
      for (std::size_t j = 0; j < J; ++j) {
        const double s = sy[l * J + j];
        double* out = &t2[(m * J + j) * K];
        for (std::size_t k = 0; k < K; ++k) out[k] += s * row[k];
      }
    }
  }
  // stage 3: contract m against x
  Lattice dw(t.extents);
  auto v = dw.values();
  const double prefactor = 2.0 * std::sqrt(2.0 * tau);
  const auto planes = static_cast<std::ptrdiff_t>(K);
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t kk = 0; kk < planes; ++kk) {
    const auto k = static_cast<std::size_t>(kk);
    for (std::size_t j = 0; j < J; ++j) {
      double* out = &v[I * (j + J * k)];
      for (std::size_t m = 0; m < M; ++m) {
        const double c = t2[(m * J + j) * K + k];
        for (std::size_t i = 0; i < I; ++i) out[i] += c * sx[m * I + i];
      }
      for (std::size_t i = 0; i < I; ++i) out[i] *= prefactor;
    }
  }
  return dw;
}

Lattice sample_increment(NoiseRng& rng, const BasisTables& tables, double tau) {
  std::vector<double> xi(tables.modes * tables.modes * tables.modes);
  for (double& x : xi) x = rng.next_gaussian();
  return assemble_increment(tables, tau, xi);
}

std::vector<Lattice> coarsen_path(std::span<const Lattice> fine, std::size_t ratio) {
  if (ratio == 0) throw std::invalid_argument("coarsening ratio must be >= 1");
  if (fine.size() % ratio != 0) {
    throw std::invalid_argument("cannot coarsen " + std::to_string(fine.size()) + " increments by ratio " +
                                std::to_string(ratio));
  }
  std::vector<Lattice> coarse;
  coarse.reserve(fine.size() / ratio);
  for (std::size_t n = 0; n < fine.size(); n += ratio) {
    Lattice sum = fine[n];
    auto acc = sum.values();
    for (std::size_t r = 1; r < ratio; ++r) {
      const auto add = fine[n + r].values();
      if (add.size() != acc.size()) throw std::invalid_argument("increments differ in shape");
      for (std::size_t p = 0; p < acc.size(); ++p) acc[p] += add[p];
    }
    coarse.push_back(std::move(sum));
  }
  return coarse;
}

SampledNoise::SampledNoise(std::shared_ptr<const BasisTables> tables, double tau, const NoiseSpec& spec,
                           std::size_t steps)
    : tables_(std::move(tables)), tau_(tau), spec_(spec), steps_(steps) {
  if (!tables_) throw std::invalid_argument("SampledNoise needs basis tables");
  if (tables_->modes != spec.modes) throw std::invalid_argument("basis tables and noise spec disagree on M");
}

Lattice SampledNoise::increment(std::size_t step) const {
  if (step >= steps_) throw std::out_of_range("noise step " + std::to_string(step) + " beyond path length");
  NoiseRng rng(spec_.seed, spec_.path_id);
  rng.seek(step);
  return sample_increment(rng, *tables_, tau_);
}

std::vector<Lattice> record(const NoiseSource& source) {
  std::vector<Lattice> out;
  out.reserve(source.size());
  for (std::size_t n = 0; n < source.size(); ++n) out.push_back(source.increment(n));
  return out;
}

namespace {

static_assert(std::endian::native == std::endian::little, "noise files are written little-endian");

constexpr char kMagic[8] = {'S', 'M', 'X', 'N', 'O', 'I', 'S', 'E'};

template <class T>
void put(std::ofstream& out, const T& v) {
  out.write(reinterpret_cast<const char*>(&v), sizeof(T));
}

template <class T>
T get(std::ifstream& in) {
  T v{};
  in.read(reinterpret_cast<char*>(&v), sizeof(T));
  return v;
}

}  // namespace

void write_increments(const std::filesystem::path& path, const NoiseFileHeader& header,
                      std::span<const Lattice> increments) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot open " + path.string() + " for writing");
  out.write(kMagic, sizeof kMagic);
  put(out, kNoiseFileVersion);
  put(out, header.seed);
  put(out, header.path_id);
  put(out, header.modes);
  put(out, header.tau);
  for (std::size_t c : header.extents) put(out, static_cast<std::uint32_t>(c));
  put(out, static_cast<std::uint64_t>(increments.size()));
  for (const Lattice& dw : increments) {
    if (dw.extents() != header.extents) throw std::invalid_argument("increment shape differs from header");
    const auto v = dw.values();
    out.write(reinterpret_cast<const char*>(v.data()), static_cast<std::streamsize>(v.size() * sizeof(double)));
  }
  if (!out) throw std::runtime_error("write failed for " + path.string());
}

NoiseFile read_increments(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path.string());
  char magic[8];
  in.read(magic, sizeof magic);
  if (!in || std::memcmp(magic, kMagic, sizeof kMagic) != 0) {
    throw std::runtime_error(path.string() + " is not a noise increment file");
  }
  const auto version = get<std::uint32_t>(in);
  if (version != kNoiseFileVersion) {
    throw std::runtime_error(path.string() + ": unsupported noise file version " + std::to_string(version));
  }
  NoiseFile file;
  file.header.seed = get<std::uint64_t>(in);
  file.header.path_id = get<std::uint64_t>(in);
  file.header.modes = get<std::uint32_t>(in);
  file.header.tau = get<double>(in);
  for (std::size_t& c : file.header.extents) c = get<std::uint32_t>(in);
  const auto steps = get<std::uint64_t>(in);
  if (!in) throw std::runtime_error(path.string() + ": truncated header");
  file.increments.reserve(steps);
  for (std::uint64_t n = 0; n < steps; ++n) {
    Lattice dw(file.header.extents);
    auto v = dw.values();
    in.read(reinterpret_cast<char*>(v.data()), static_cast<std::streamsize>(v.size() * sizeof(double)));
    if (!in) throw std::runtime_error(path.string() + ": truncated at increment " + std::to_string(n));
    file.increments.push_back(std::move(dw));
  }
  return file;
}

}  // namespace smaxwell
