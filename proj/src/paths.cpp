#include "heis/paths.hpp"

#include <cmath>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <limits>

#include "heis/error.hpp"

namespace heis {

void PathConfig::validate() const {
  if (n < 1) throw UsageError("n must be >= 1");
  if (n_paths < 1) throw UsageError("n_paths must be >= 1");
  if (steps < 1) throw UsageError("steps must be >= 1");
  if (refine < 1) throw UsageError("refine must be >= 1");
  if (!(horizon > 0.0) || !std::isfinite(horizon)) throw UsageError("horizon must be > 0");
  if (steps * refine > std::numeric_limits<std::uint32_t>::max()) {
    throw UsageError("steps * refine exceeds the 32-bit draw counter");
  }
  if (n > std::numeric_limits<std::uint32_t>::max()) throw UsageError("n too large");
}

PathConfig PathConfig::coarsened(std::size_t factor) const {
  if (factor < 1 || steps % factor != 0) throw UsageError("coarsening factor must divide steps");
  PathConfig c = *this;
  c.steps = steps / factor;
  c.refine = refine * factor;
  return c;
}

void BatchView::point_coords(bool mirrored, double* out) const {
  const double s = mirrored ? -1.0 : 1.0;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t l = 0; l < lanes; ++l) {
      out[i * lanes + l] = s * b[i * lanes + l];
      out[(n + i) * lanes + l] = s * w[i * lanes + l];
    }
  }
  for (std::size_t l = 0; l < lanes; ++l) out[2 * n * lanes + l] = 0.5 * levy[l];
}

namespace detail {

void generate_increments(const PathConfig& cfg, std::size_t first_path, std::size_t lanes,
                         std::size_t step, double* db, double* dw) {
  const auto& kern = kernels::active();
  const auto key = cfg.seed.key();
  const double sd = std::sqrt(cfg.horizon / static_cast<double>(cfg.steps * cfg.refine));
  const double sign = cfg.negate ? -1.0 : 1.0;
  double gb[kernels::kLanes], gw[kernels::kLanes], sb[kernels::kLanes], sw[kernels::kLanes];
  for (std::size_t i = 0; i < cfg.n; ++i) {
    std::fill(sb, sb + lanes, 0.0);
    std::fill(sw, sw + lanes, 0.0);
    for (std::size_t r = 0; r < cfg.refine; ++r) {
      const auto draw = static_cast<std::uint32_t>(step * cfg.refine + r);
      kern.normals(key[0], key[1], first_path, lanes, draw, static_cast<std::uint32_t>(i), gb, gw);
      for (std::size_t l = 0; l < lanes; ++l) {
        sb[l] += sd * gb[l];
        sw[l] += sd * gw[l];
      }
    }
    for (std::size_t l = 0; l < lanes; ++l) {
      db[i * lanes + l] = sign * sb[l];
      dw[i * lanes + l] = sign * sw[l];
    }
  }
}

}  // namespace detail

PathBundle::PathBundle(PathConfig cfg, std::size_t record_stride) : cfg_(cfg), stride_(record_stride) {
  cfg_.validate();
  if (stride_ < 1 || cfg_.steps % stride_ != 0) {
    throw UsageError("record stride must divide the number of steps");
  }
  records_ = cfg_.steps / stride_ + 1;
  data_.assign(cfg_.n_paths * records_ * width(), 0.0);
}

std::size_t PathBundle::grid_index(double t) const {
  const double dt = cfg_.dt();
  const double k = std::round(t / dt);
  if (!std::isfinite(t) || t < 0.0 || k > static_cast<double>(cfg_.steps) ||
      std::abs(k * dt - t) > 1e-9 * std::max(1.0, cfg_.horizon)) {
    throw UsageError("time " + std::to_string(t) + " is not on the path grid");
  }
  const auto step = static_cast<std::size_t>(k);
  if (!is_recorded(step)) {
    throw UsageError("time " + std::to_string(t) + " is on the grid but was not recorded");
  }
  return step;
}

std::span<const double> PathBundle::record(std::size_t path, std::size_t step) const {
  if (path >= cfg_.n_paths) throw UsageError("path index out of range");
  if (!is_recorded(step)) throw UsageError("step index out of range or not recorded");
  const std::size_t r = step / stride_;
  return {data_.data() + (path * records_ + r) * width(), width()};
}

std::vector<double> PathBundle::points_soa(std::size_t step, bool mirrored) const {
  const std::size_t n = cfg_.n;
  const std::size_t np = cfg_.n_paths;
  std::vector<double> out(width() * np);
  const double s = mirrored ? -1.0 : 1.0;
  for (std::size_t j = 0; j < np; ++j) {
    const auto rec = record(j, step);
    for (std::size_t v = 0; v < 2 * n; ++v) out[v * np + j] = s * rec[v];
    out[2 * n * np + j] = 0.5 * rec[2 * n];
  }
  return out;
}

namespace {

class Recorder {
 public:
  Recorder(PathBundle& bundle, std::size_t first, std::size_t lanes)
      : bundle_(bundle), first_(first), lanes_(lanes) {}

  void step(const BatchView& v) {
    if (v.step % bundle_.record_stride() == 0) store(v);
  }
  void finish(const BatchView& v) { store(v); }

 private:
  void store(const BatchView& v) {
    const std::size_t n = v.n;
    const std::size_t width = bundle_.width();
    const std::size_t r = v.step / bundle_.record_stride();
    auto data = bundle_.mutable_data();
    for (std::size_t l = 0; l < lanes_; ++l) {
      double* rec = data.data() + ((first_ + l) * bundle_.records() + r) * width;
      for (std::size_t i = 0; i < n; ++i) {
        rec[i] = v.b[i * lanes_ + l];
        rec[n + i] = v.w[i * lanes_ + l];
      }
      rec[2 * n] = v.levy[l];
    }
  }

  PathBundle& bundle_;
  std::size_t first_;
  std::size_t lanes_;
};

}  // namespace

PathBundle simulate(const PathConfig& cfg, std::size_t record_stride) {
  PathBundle bundle(cfg, record_stride);
  walk_paths(cfg, [&](std::size_t first, std::size_t lanes) { return Recorder(bundle, first, lanes); });
  return bundle;
}

PathBundle simulate(std::size_t n, std::size_t n_paths, std::size_t steps, double horizon, SeedPolicy seed) {
  PathConfig cfg;
  cfg.n = n;
  cfg.n_paths = n_paths;
  cfg.steps = steps;
  cfg.horizon = horizon;
  cfg.seed = seed;
  return simulate(cfg, 1);
}

PathBundle mirror_paths(const PathBundle& paths) {
  PathConfig cfg = paths.config();
  cfg.negate = !cfg.negate;
  return simulate(cfg, paths.record_stride());
}

GroupPoint point_at(const PathBundle& paths, std::size_t path, std::size_t step, bool mirrored) {
  const auto rec = paths.record(path, step);
  const std::size_t n = paths.n();
  std::vector<double> c(rec.begin(), rec.end());
  if (mirrored) {
    for (std::size_t v = 0; v < 2 * n; ++v) c[v] = -c[v];
  }
  c[2 * n] *= 0.5;
  return GroupPoint::from_coordinates(c);
}

namespace {

constexpr char kMagic[8] = {'H', 'E', 'I', 'S', 'P', 'B', '0', '1'};

void put_u64(std::ofstream& out, std::uint64_t v) { out.write(reinterpret_cast<const char*>(&v), sizeof v); }
void put_f64(std::ofstream& out, double v) { out.write(reinterpret_cast<const char*>(&v), sizeof v); }

std::uint64_t get_u64(std::ifstream& in) {
  std::uint64_t v = 0;
  in.read(reinterpret_cast<char*>(&v), sizeof v);
  return v;
}
double get_f64(std::ifstream& in) {
  double v = 0;
  in.read(reinterpret_cast<char*>(&v), sizeof v);
  return v;
}

}  // namespace

void write_binary(const PathBundle& paths, const std::string& file) {
  std::ofstream out(file, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open '" + file + "' for writing");
  const auto& c = paths.config();
  out.write(kMagic, sizeof kMagic);
  put_u64(out, c.n);
  put_f64(out, c.horizon);
  put_u64(out, c.steps);
  put_u64(out, c.n_paths);
  put_u64(out, c.seed.master);
  put_u64(out, paths.record_stride());
  put_u64(out, c.refine);
  put_u64(out, c.negate ? 1 : 0);
  const auto data = paths.data();
  out.write(reinterpret_cast<const char*>(data.data()), static_cast<std::streamsize>(data.size() * sizeof(double)));
  if (!out) throw std::runtime_error("write to '" + file + "' failed");
}

PathBundle read_binary(const std::string& file) {
  std::ifstream in(file, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open '" + file + "'");
  char magic[sizeof kMagic];
  in.read(magic, sizeof magic);
  if (!in || std::memcmp(magic, kMagic, sizeof kMagic) != 0) {
    throw UsageError("'" + file + "' is not a path bundle");
  }
  PathConfig c;
  c.n = get_u64(in);
  c.horizon = get_f64(in);
  c.steps = get_u64(in);
  c.n_paths = get_u64(in);
  c.seed.master = get_u64(in);
  const std::size_t stride = get_u64(in);
  c.refine = get_u64(in);
  c.negate = get_u64(in) != 0;
  if (!in) throw UsageError("truncated path bundle header in '" + file + "'");
  PathBundle bundle(c, stride);
  auto data = bundle.mutable_data();
  in.read(reinterpret_cast<char*>(data.data()), static_cast<std::streamsize>(data.size() * sizeof(double)));
  if (!in) throw UsageError("truncated path bundle data in '" + file + "'");
  return bundle;
}

void write_terminal_csv(const PathBundle& paths, const std::string& file) {
  std::FILE* f = std::fopen(file.c_str(), "w");
  if (!f) throw std::runtime_error("cannot open '" + file + "' for writing");
  const std::size_t n = paths.n();
  std::fputs("path", f);
  for (std::size_t i = 1; i <= n; ++i) std::fprintf(f, ",b_%zu", i);
  for (std::size_t i = 1; i <= n; ++i) std::fprintf(f, ",w_%zu", i);
  std::fputs(",z\n", f);
  for (std::size_t j = 0; j < paths.n_paths(); ++j) {
    const auto rec = paths.record(j, paths.steps());
    std::fprintf(f, "%zu", j);
    for (std::size_t v = 0; v < 2 * n; ++v) std::fprintf(f, ",%.17g", rec[v]);
    std::fprintf(f, ",%.17g\n", 0.5 * rec[2 * n]);
  }
  if (std::fclose(f) != 0) throw std::runtime_error("write to '" + file + "' failed");
}

}  // namespace heis
