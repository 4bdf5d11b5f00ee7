#include "sdd/overlap_table.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstring>
#include <fstream>
#include <limits>
#include <stdexcept>
#include <thread>

static_assert(std::endian::native == std::endian::little,
              "table files are little-endian; big-endian hosts are unsupported");

namespace sdd {
namespace {

constexpr std::uint32_t kVersion = 1;
constexpr float kAbsent = std::numeric_limits<float>::quiet_NaN();
constexpr int kKeyBias = 512;  // 10 bits per dimension in the packed key

int theta_bins(double res_theta) {
    const int n = static_cast<int>(std::llround(kTwoPi / res_theta));
    if (n < 1) throw std::invalid_argument("heading resolution exceeds 2*pi");
    return n;
}

std::uint64_t pack_key(const std::array<int, 6>& key, int ndims) {
    std::uint64_t packed = 0;
    for (int i = 0; i < ndims; ++i) {
        const int idx = key[i];
        if (idx < -kKeyBias || idx >= kKeyBias)
            throw std::out_of_range("table key index exceeds packed range");
        packed |= (static_cast<std::uint64_t>(idx + kKeyBias) & 0x3FF)
                  << (10 * i);
    }
    return packed;
}

std::array<int, 6> unpack_key(std::uint64_t packed, int ndims) {
    std::array<int, 6> key{};
    for (int i = 0; i < ndims; ++i)
        key[i] = static_cast<int>((packed >> (10 * i)) & 0x3FF) - kKeyBias;
    return key;
}

void validate_params(const DynamicsModel& model, const OverlapParams& p) {
    const int want = model.kind() == ModelKind::kCar3 ? 3 : 6;
    if (static_cast<int>(p.resolutions.size()) != want)
        throw std::invalid_argument("resolutions must have one entry per relative dimension");
    for (double res : p.resolutions)
        if (res <= 0.0) throw std::invalid_argument("resolutions must be positive");
    if (p.H < 1) throw std::invalid_argument("H must be at least 1");
    if (p.r <= 0.0 || p.R <= 0.0) throw std::invalid_argument("r and R must be positive");
}

template <typename T>
void write_raw(std::ostream& os, const T& value) {
    os.write(reinterpret_cast<const char*>(&value), sizeof(T));
}

template <typename T>
T read_raw(std::istream& is) {
    T value{};
    is.read(reinterpret_cast<char*>(&value), sizeof(T));
    if (!is) throw std::runtime_error("truncated table file");
    return value;
}

}  // namespace

std::array<int, 6> OverlapTable::key_of(const RelConfig& rc) const {
    if (rc.dims != ndims_) throw std::invalid_argument("relative configuration dimension mismatch");
    std::array<int, 6> key{};
    const int pos_dims = kind_ == ModelKind::kCar3 ? 2 : 3;
    for (int i = 0; i < pos_dims; ++i)
        key[i] = static_cast<int>(std::llround(rc.q[i] / params_.resolutions[i]));
    const int ti = pos_dims;  // heading slot
    const int nt = theta_bins(params_.resolutions[ti]);
    int kt = static_cast<int>(std::llround(rc.q[ti] / params_.resolutions[ti]));
    kt = ((kt % nt) + nt) % nt;
    key[ti] = kt;
    if (kind_ == ModelKind::kUav5) {
        key[4] = static_cast<int>(std::llround(rc.q[4] / params_.resolutions[4]));
        key[5] = static_cast<int>(std::llround(rc.q[5] / params_.resolutions[5]));
    }
    return key;
}

bool OverlapTable::key_in_box(const std::array<int, 6>& key) const {
    for (int i = 0; i < ndims_; ++i)
        if (key[i] < lo_[i] || key[i] >= lo_[i] + n_[i]) return false;
    return true;
}

std::size_t OverlapTable::flat_index(const std::array<int, 6>& key) const {
    std::size_t flat = 0;
    for (int i = 0; i < ndims_; ++i)
        flat = flat * n_[i] + static_cast<std::size_t>(key[i] - lo_[i]);
    return flat;
}

float OverlapTable::at_key(const std::array<int, 6>& key) const {
    if (!key_in_box(key)) return kAbsent;
    return dense_[flat_index(key)];
}

double OverlapTable::lookup_rel(const RelConfig& rc) const {
    std::array<int, 6> key = key_of(rc);
    float eta = at_key(key);
    if (!std::isnan(eta)) return eta;

    // Query position left the stored ball. Return the nearest stored key
    // holding the same heading/speed indices; ties break on the lower
    // lexicographic position index.
    const int pos_dims = kind_ == ModelKind::kCar3 ? 2 : 3;
    double best = std::numeric_limits<double>::infinity();
    std::array<int, 6> best_key{};
    bool found = false;
    std::array<int, 6> probe = key;
    const int z_lo = pos_dims == 3 ? lo_[2] : 0;
    const int z_n = pos_dims == 3 ? n_[2] : 1;
    for (int ix = lo_[0]; ix < lo_[0] + n_[0]; ++ix)
        for (int iy = lo_[1]; iy < lo_[1] + n_[1]; ++iy)
            for (int iz = z_lo; iz < z_lo + z_n; ++iz) {
                probe[0] = ix;
                probe[1] = iy;
                if (pos_dims == 3) probe[2] = iz;
                const float value = dense_[flat_index(probe)];
                if (std::isnan(value)) continue;
                double d2 = 0.0;
                for (int i = 0; i < pos_dims; ++i) {
                    const double di = (probe[i] - key[i]) * params_.resolutions[i];
                    d2 += di * di;
                }
                if (d2 < best) {
                    best = d2;
                    best_key = probe;
                    found = true;
                }
            }
    if (!found) throw std::logic_error("overlap table is empty");
    return dense_[flat_index(best_key)];
}

double OverlapTable::lookup(const StateC& s, const StateC& s2) const {
    if (s.kind != kind_) throw std::invalid_argument("state kind does not match table");
    return lookup_rel(relative_config(s, s2));
}

void OverlapTable::build_radial_ceiling() {
    const int pos_dims = kind_ == ModelKind::kCar3 ? 2 : 3;
    radial_width_ = params_.resolutions[0];
    double snap2 = 0.0;
    for (int i = 0; i < pos_dims; ++i) {
        radial_width_ = std::min(radial_width_, params_.resolutions[i]);
        snap2 += params_.resolutions[i] * params_.resolutions[i];
    }
    const int buckets = static_cast<int>(params_.R / radial_width_) + 2;
    std::vector<float> raw(buckets, 0.0f);

    std::array<int, 6> key = lo_;
    for (std::size_t flat = 0; flat < dense_.size(); ++flat) {
        const float value = dense_[flat];
        if (!std::isnan(value)) {
            double d2 = 0.0;
            for (int i = 0; i < pos_dims; ++i) {
                const double di = key[i] * params_.resolutions[i];
                d2 += di * di;
            }
            const int b = std::min(buckets - 1,
                                   static_cast<int>(std::sqrt(d2) / radial_width_));
            raw[b] = std::max(raw[b], value);
        }
        for (int i = ndims_ - 1; i >= 0; --i) {
            if (++key[i] < lo_[i] + n_[i]) break;
            key[i] = lo_[i];
        }
    }

    // A query at distance d may read an entry up to one snap radius
    // nearer (rounding, or the rim fallback), so pad the suffix max by
    // that many buckets.
    const int pad = static_cast<int>(std::ceil(std::sqrt(snap2) / radial_width_));
    std::vector<float> suffix(buckets);
    float acc = 0.0f;
    for (int b = buckets - 1; b >= 0; --b) {
        acc = std::max(acc, raw[b]);
        suffix[b] = acc;
    }
    radial_ceiling_.resize(buckets);
    for (int b = 0; b < buckets; ++b) radial_ceiling_[b] = suffix[std::max(0, b - pad)];
}

double OverlapTable::eta_ceiling(double dist) const {
    if (radial_ceiling_.empty() || radial_width_ <= 0.0) return 1.0;
    const int last = static_cast<int>(radial_ceiling_.size()) - 1;
    const int b = std::clamp(static_cast<int>(dist / radial_width_), 0, last);
    return radial_ceiling_[b];
}

OverlapTable precompute_table(const DynamicsModel& model, const OverlapParams& params,
                              int threads) {
    validate_params(model, params);
    OverlapTable table;
    table.kind_ = model.kind();
    table.params_ = params;
    const bool car = model.kind() == ModelKind::kCar3;
    const int pos_dims = car ? 2 : 3;
    table.ndims_ = car ? 3 : 6;

    for (int i = 0; i < pos_dims; ++i) {
        const int N = static_cast<int>(std::floor(params.R / params.resolutions[i] + 1e-12));
        table.lo_[i] = -N;
        table.n_[i] = 2 * N + 1;
    }
    const int ti = pos_dims;
    const int nt = theta_bins(params.resolutions[ti]);
    table.lo_[ti] = 0;
    table.n_[ti] = nt;
    if (!car) {
        const Uav5Params& up = model.uav_params();
        for (int i = 4; i <= 5; ++i) {
            const int v_lo = static_cast<int>(std::llround(up.v_min / params.resolutions[i]));
            const int v_hi = static_cast<int>(std::llround(up.v_max / params.resolutions[i]));
            if (v_hi < v_lo) throw std::invalid_argument("speed resolution exceeds speed range");
            table.lo_[i] = v_lo;
            table.n_[i] = v_hi - v_lo + 1;
        }
    }

    std::size_t cells = 1;
    for (int i = 0; i < table.ndims_; ++i) {
        cells *= static_cast<std::size_t>(table.n_[i]);
        if (cells > 200'000'000u)
            throw std::invalid_argument("table lattice too large; coarsen resolutions or shrink R");
    }
    table.dense_.assign(cells, kAbsent);

    // Position lattice points inside the ball, in lexicographic order.
    std::vector<std::array<int, 3>> points;
    const double R2 = params.R * params.R;
    const int z_lo = pos_dims == 3 ? table.lo_[2] : 0;
    const int z_hi = pos_dims == 3 ? table.lo_[2] + table.n_[2] - 1 : 0;
    for (int ix = table.lo_[0]; ix <= table.lo_[0] + table.n_[0] - 1; ++ix)
        for (int iy = table.lo_[1]; iy <= table.lo_[1] + table.n_[1] - 1; ++iy)
            for (int iz = z_lo; iz <= z_hi; ++iz) {
                const double px = ix * params.resolutions[0];
                const double py = iy * params.resolutions[1];
                const double pz = pos_dims == 3 ? iz * params.resolutions[2] : 0.0;
                if (px * px + py * py + pz * pz <= R2)
                    points.push_back({ix, iy, iz});
            }

    // Canonical query-side subtrees, one per origin speed bin.
    const Uav5Params& up = model.uav_params();
    std::vector<Subtree> origin_subs;
    if (car) {
        origin_subs.push_back(build_subtree(model, StateC::car(0, 0, 0), params.H));
    } else {
        for (int iv = table.lo_[4]; iv < table.lo_[4] + table.n_[4]; ++iv) {
            const double v1 = std::clamp(iv * params.resolutions[4], up.v_min, up.v_max);
            origin_subs.push_back(build_subtree(model, StateC::uav(0, 0, 0, 0, v1), params.H));
        }
    }

    auto work = [&](std::size_t begin, std::size_t end) {
        for (std::size_t pi = begin; pi < end; ++pi) {
            const auto [ix, iy, iz] = points[pi];
            std::array<int, 6> key{};
            key[0] = ix;
            key[1] = iy;
            if (!car) key[2] = iz;
            const double px = ix * params.resolutions[0];
            const double py = iy * params.resolutions[1];
            const double pz = car ? 0.0 : iz * params.resolutions[2];
            for (int it = 0; it < nt; ++it) {
                key[ti] = it;
                const double theta = wrap_angle(it * params.resolutions[ti]);
                if (car) {
                    const StateC s2 = StateC::car(px, py, theta);
                    const Subtree b = build_subtree(model, s2, params.H);
                    table.dense_[table.flat_index(key)] =
                        static_cast<float>(overlap_ratio(origin_subs[0], b, params));
                } else {
                    for (int iv2 = table.lo_[5]; iv2 < table.lo_[5] + table.n_[5]; ++iv2) {
                        key[5] = iv2;
                        const double v2 = std::clamp(iv2 * params.resolutions[5], up.v_min, up.v_max);
                        const Subtree b =
                            build_subtree(model, StateC::uav(px, py, pz, theta, v2), params.H);
                        for (int iv1 = table.lo_[4]; iv1 < table.lo_[4] + table.n_[4]; ++iv1) {
                            key[4] = iv1;
                            table.dense_[table.flat_index(key)] = static_cast<float>(
                                overlap_ratio(origin_subs[iv1 - table.lo_[4]], b, params));
                        }
                    }
                }
            }
        }
    };

    int n_threads = threads > 0 ? threads
                                : static_cast<int>(std::thread::hardware_concurrency());
    if (n_threads < 1) n_threads = 1;
    if (static_cast<std::size_t>(n_threads) > points.size())
        n_threads = static_cast<int>(points.size() ? points.size() : 1);
    if (n_threads <= 1) {
        work(0, points.size());
    } else {
        std::vector<std::thread> pool;
        const std::size_t chunk = (points.size() + n_threads - 1) / n_threads;
        for (int t = 0; t < n_threads; ++t) {
            const std::size_t begin = t * chunk;
            const std::size_t end = std::min(points.size(), begin + chunk);
            if (begin >= end) break;
            pool.emplace_back(work, begin, end);
        }
        for (std::thread& th : pool) th.join();
    }

    std::uint64_t count = 0;
    for (float v : table.dense_)
        if (!std::isnan(v)) ++count;
    table.entry_count_ = count;
    table.build_radial_ceiling();
    return table;
}

void OverlapTable::save(const std::string& path) const {
    std::ofstream os(path, std::ios::binary | std::ios::trunc);
    if (!os) throw std::runtime_error("cannot write table file: " + path);
    os.write("SOVT", 4);
    write_raw(os, kVersion);
    write_raw(os, static_cast<std::uint32_t>(kind_));
    write_raw(os, static_cast<std::uint32_t>(params_.H));
    write_raw(os, params_.r);
    write_raw(os, params_.R);
    write_raw(os, static_cast<std::uint32_t>(params_.full_state_overlap ? 1 : 0));
    write_raw(os, static_cast<std::uint32_t>(ndims_));
    for (int i = 0; i < ndims_; ++i) write_raw(os, params_.resolutions[i]);
    write_raw(os, entry_count_);

    std::array<int, 6> key = lo_;
    for (std::size_t flat = 0; flat < dense_.size(); ++flat) {
        const float value = dense_[flat];
        if (!std::isnan(value)) {
            write_raw(os, pack_key(key, ndims_));
            write_raw(os, value);
        }
        for (int i = ndims_ - 1; i >= 0; --i) {
            if (++key[i] < lo_[i] + n_[i]) break;
            key[i] = lo_[i];
        }
    }
    if (!os) throw std::runtime_error("failed writing table file: " + path);
}

OverlapTable OverlapTable::load(const std::string& path) {
    std::ifstream is(path, std::ios::binary);
    if (!is) throw std::runtime_error("cannot open table file: " + path);
    char magic[4];
    is.read(magic, 4);
    if (!is || std::memcmp(magic, "SOVT", 4) != 0)
        throw std::runtime_error("not a SOVT table file: " + path);
    const auto version = read_raw<std::uint32_t>(is);
    if (version != kVersion)
        throw std::runtime_error("unsupported table version " + std::to_string(version));

    OverlapTable table;
    table.kind_ = static_cast<ModelKind>(read_raw<std::uint32_t>(is));
    table.params_.H = static_cast<int>(read_raw<std::uint32_t>(is));
    table.params_.r = read_raw<double>(is);
    table.params_.R = read_raw<double>(is);
    table.params_.full_state_overlap = read_raw<std::uint32_t>(is) != 0;
    table.ndims_ = static_cast<int>(read_raw<std::uint32_t>(is));
    const int want = table.kind_ == ModelKind::kCar3 ? 3 : 6;
    if (table.ndims_ != want)
        throw std::runtime_error("table dimension count does not match its model");
    table.params_.resolutions.resize(table.ndims_);
    for (int i = 0; i < table.ndims_; ++i) table.params_.resolutions[i] = read_raw<double>(is);
    const auto count = read_raw<std::uint64_t>(is);

    std::vector<std::pair<std::uint64_t, float>> entries;
    entries.reserve(count);
    for (std::uint64_t e = 0; e < count; ++e) {
        const auto packed = read_raw<std::uint64_t>(is);
        const auto value = read_raw<float>(is);
        entries.emplace_back(packed, value);
    }

    if (entries.empty()) throw std::runtime_error("table file holds no entries: " + path);
    std::array<int, 6> kmin{}, kmax{};
    kmin.fill(std::numeric_limits<int>::max());
    kmax.fill(std::numeric_limits<int>::min());
    for (const auto& [packed, value] : entries) {
        (void)value;
        const std::array<int, 6> key = unpack_key(packed, table.ndims_);
        for (int i = 0; i < table.ndims_; ++i) {
            kmin[i] = std::min(kmin[i], key[i]);
            kmax[i] = std::max(kmax[i], key[i]);
        }
    }
    std::size_t cells = 1;
    for (int i = 0; i < table.ndims_; ++i) {
        table.lo_[i] = kmin[i];
        table.n_[i] = kmax[i] - kmin[i] + 1;
        cells *= static_cast<std::size_t>(table.n_[i]);
    }
    table.dense_.assign(cells, kAbsent);
    for (const auto& [packed, value] : entries)
        table.dense_[table.flat_index(unpack_key(packed, table.ndims_))] = value;
    table.entry_count_ = count;
    table.build_radial_ceiling();
    return table;
}

}  // namespace sdd
