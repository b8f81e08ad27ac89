#include "mixrabi/fock.hpp"

#include <algorithm>
#include <cstring>
#include <fstream>
#include <iomanip>
#include <sstream>

#include <unsupported/Eigen/MatrixFunctions>

namespace mixrabi {

namespace {

void require_dim(int M, int minimum) {
  if (M < minimum) {
    throw InvalidParameter("Fock truncation must be >= " + std::to_string(minimum));
  }
}

Eigen::MatrixXd annihilation(int M) {
  Eigen::MatrixXd a = Eigen::MatrixXd::Zero(M, M);
  for (int n = 1; n < M; ++n) a(n - 1, n) = std::sqrt(static_cast<double>(n));
  return a;
}

}  // namespace

std::pair<TruncatedOperator, TruncatedOperator> ladder_matrices(int M) {
  require_dim(M, 2);
  TruncatedOperator lower{annihilation(M)};
  TruncatedOperator raise{lower.entries.transpose()};
  return {std::move(lower), std::move(raise)};
}

TruncatedOperator squeeze_matrix(double r, int M) {
  require_dim(M, 2);
  if (M < 20.0 * std::exp(2.0 * std::abs(r))) {
    std::ostringstream os;
    os << "squeeze_matrix: truncation M=" << M << " is small for r=" << r
       << " (support spreads by ~exp(2|r|))";
    Warnings::add(os.str());
  }
  const Eigen::MatrixXd a = annihilation(M);
  const Eigen::MatrixXd ad = a.transpose();
  const Eigen::MatrixXd gen = 0.5 * r * (a * a - ad * ad);
  return {gen.exp()};
}

TruncatedOperator displacement_matrix(double w, int M) {
  require_dim(M, 2);
  if (M < 4.0 * (w * w + 10.0)) {
    std::ostringstream os;
    os << "displacement_matrix: truncation M=" << M << " is small for w=" << w;
    Warnings::add(os.str());
  }
  const Eigen::MatrixXd a = annihilation(M);
  const Eigen::MatrixXd gen = w * (a.transpose() - a);
  return {gen.exp()};
}

Eigen::MatrixXcd displacement_matrix(std::complex<double> alpha, int M) {
  require_dim(M, 2);
  const Eigen::MatrixXcd a = annihilation(M).cast<std::complex<double>>();
  const Eigen::MatrixXcd gen = alpha * a.adjoint() - std::conj(alpha) * a;
  return gen.exp();
}

int default_overlap_dim(const BogoliubovFrame& frame, int n_max) {
  const double spread = std::ceil(20.0 * std::exp(2.0 * frame.r));
  return static_cast<int>(std::max({200.0, 8.0 * n_max, spread}));
}

namespace {

OverlapTable overlap_table_at(const BogoliubovFrame& frame, Family family, int n_max, int M) {
  const Eigen::MatrixXd a = annihilation(M);
  const Eigen::MatrixXd ad = a.transpose();
  const Eigen::MatrixXd sq_gen = 0.5 * frame.r * (a * a - ad * ad);
  const double w = family == Family::A ? frame.w : frame.w_prime;
  // D^dag(w) = exp(-w (a^dag - a)); S^dag(r) = S(-r)
  const Eigen::MatrixXd disp_dag = (-w * (ad - a)).exp();
  const Eigen::MatrixXd squeeze = family == Family::A ? Eigen::MatrixXd(sq_gen) : Eigen::MatrixXd(-sq_gen);
  const Eigen::MatrixXd squeeze_op = squeeze.exp();
  const Eigen::MatrixXd top = squeeze_op.topRows(2) * disp_dag.leftCols(n_max + 1);

  OverlapTable t;
  t.family = family;
  t.n_max = n_max;
  t.dim = M;
  t.row0.resize(n_max + 1);
  t.row1.resize(n_max + 1);
  for (int n = 0; n <= n_max; ++n) {
    t.row0[n] = top(0, n);
    t.row1[n] = top(1, n);
  }
  return t;
}

}  // namespace

OverlapTable overlap_table(const BogoliubovFrame& frame, Family family, int n_max, int M) {
  if (n_max < 0) throw InvalidParameter("overlap_table: n_max must be >= 0");
  if (M == 0) M = default_overlap_dim(frame, n_max);
  if (4 * n_max >= M) {
    throw InvalidParameter("overlap_table: need n_max < M/4 for truncation headroom");
  }
  OverlapTable t = overlap_table_at(frame, family, n_max, M);
  const OverlapTable check = overlap_table_at(frame, family, n_max, M + 50);
  double drift = 0.0;
  for (int n = 0; n <= n_max; ++n) {
    drift = std::max({drift, std::abs(t.row0[n] - check.row0[n]), std::abs(t.row1[n] - check.row1[n])});
  }
  if (drift > 1e-10) {
    std::ostringstream os;
    os << "overlap_table: entries moved by " << drift << " between M=" << M << " and M=" << M + 50;
    throw ConvergenceFailure(os.str());
  }
  return t;
}

// ---------------------------------------------------------------------------

namespace {

constexpr char kMagic[8] = {'M', 'R', 'B', 'O', 'V', 'L', '\0', '\0'};

template <class T>
void write_raw(std::ostream& os, const T& v) {
  os.write(reinterpret_cast<const char*>(&v), sizeof(T));
}

template <class T>
bool read_raw(std::istream& is, T& v) {
  return static_cast<bool>(is.read(reinterpret_cast<char*>(&v), sizeof(T)));
}

}  // namespace

OverlapCache::OverlapCache(std::filesystem::path dir) : dir_(std::move(dir)) {
  std::filesystem::create_directories(dir_);
}

std::uint64_t OverlapCache::key_hash(double g1, double g2, Family family, int n_max, int dim) {
  // FNV-1a over the raw key bytes
  std::uint64_t h = 14695981039346656037ull;
  auto mix = [&h](const void* p, std::size_t n) {
    const auto* b = static_cast<const unsigned char*>(p);
    for (std::size_t i = 0; i < n; ++i) {
      h ^= b[i];
      h *= 1099511628211ull;
    }
  };
  const std::uint8_t fam = family == Family::A ? 0 : 1;
  const std::uint32_t n32 = static_cast<std::uint32_t>(n_max);
  const std::uint32_t d32 = static_cast<std::uint32_t>(dim);
  mix(&g1, sizeof g1);
  mix(&g2, sizeof g2);
  mix(&fam, sizeof fam);
  mix(&n32, sizeof n32);
  mix(&d32, sizeof d32);
  return h;
}

std::filesystem::path OverlapCache::path_for(double g1, double g2, Family family, int n_max,
                                             int dim) const {
  std::ostringstream name;
  name << "ovl_" << std::hex << std::setw(16) << std::setfill('0')
       << key_hash(g1, g2, family, n_max, dim) << ".bin";
  return dir_ / name.str();
}

std::optional<OverlapTable> OverlapCache::load(double g1, double g2, Family family, int n_max,
                                               int dim) const {
  std::ifstream in(path_for(g1, g2, family, n_max, dim), std::ios::binary);
  if (!in) return std::nullopt;
  char magic[8];
  std::uint32_t version = 0, n32 = 0, d32 = 0;
  std::uint8_t fam = 0;
  char pad[3];
  double kg1 = 0, kg2 = 0;
  std::uint64_t hash = 0;
  if (!in.read(magic, 8) || std::memcmp(magic, kMagic, 8) != 0) return std::nullopt;
  if (!read_raw(in, version) || version != kVersion) return std::nullopt;
  if (!read_raw(in, fam) || !in.read(pad, 3)) return std::nullopt;
  if (!read_raw(in, kg1) || !read_raw(in, kg2) || !read_raw(in, n32) || !read_raw(in, d32) || !read_raw(in, hash)) {
    return std::nullopt;
  }
  // hash collisions or stale files: the stored key must match exactly
  if (kg1 != g1 || kg2 != g2 || fam != (family == Family::A ? 0 : 1) ||
      n32 != static_cast<std::uint32_t>(n_max) || d32 != static_cast<std::uint32_t>(dim) ||
      hash != key_hash(g1, g2, family, n_max, dim)) {
    return std::nullopt;
  }
  OverlapTable t;
  t.family = family;
  t.n_max = n_max;
  t.dim = dim;
  t.row0.resize(n_max + 1);
  t.row1.resize(n_max + 1);
  for (auto& x : t.row0) {
    if (!read_raw(in, x)) return std::nullopt;
  }
  for (auto& x : t.row1) {
    if (!read_raw(in, x)) return std::nullopt;
  }
  return t;
}

void OverlapCache::store(double g1, double g2, const OverlapTable& t) const {
  const auto path = path_for(g1, g2, t.family, t.n_max, t.dim);
  const auto tmp = path.string() + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw Error("cannot write overlap cache " + tmp);
    out.write(kMagic, 8);
    write_raw(out, kVersion);
    write_raw(out, static_cast<std::uint8_t>(t.family == Family::A ? 0 : 1));
    const char pad[3] = {0, 0, 0};
    out.write(pad, 3);
    write_raw(out, g1);
    write_raw(out, g2);
    write_raw(out, static_cast<std::uint32_t>(t.n_max));
    write_raw(out, static_cast<std::uint32_t>(t.dim));
    write_raw(out, key_hash(g1, g2, t.family, t.n_max, t.dim));
    for (double x : t.row0) write_raw(out, x);
    for (double x : t.row1) write_raw(out, x);
  }
  std::filesystem::rename(tmp, path);
}

OverlapTable OverlapCache::get(const ModelParams& p, Family family, int n_max, int dim) const {
  const BogoliubovFrame frame = build_frame(p);
  if (dim == 0) dim = default_overlap_dim(frame, n_max);
  if (auto hit = load(p.g1, p.g2, family, n_max, dim)) return *hit;
  OverlapTable t = overlap_table(frame, family, n_max, dim);
  store(p.g1, p.g2, t);
  return t;
}

}  // namespace mixrabi
