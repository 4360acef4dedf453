#include "oarlink/codebook.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <fstream>

#include "oarlink/kernels.hpp"

namespace oarlink {

namespace {

double dot(const double* a, const double* b, int n) {
    double acc = 0.0;
    for (int i = 0; i < n; ++i) acc += a[i] * b[i];
    return acc;
}

// Modified Gram-Schmidt; Gaussian rows are independent with probability 1.
Matrix random_orthonormal_rows(int rows, int cols, Rng& rng) {
    Matrix m(rows, cols);
    for (double& v : m.data) v = rng.gaussian();
    for (int r = 0; r < rows; ++r) {
        double* row = m.row(r);
        for (int p = 0; p < r; ++p) {
            const double* prev = m.row(p);
            const double proj = dot(row, prev, cols);
            for (int c = 0; c < cols; ++c) row[c] -= proj * prev[c];
        }
        const double norm = std::sqrt(dot(row, row, cols));
        for (int c = 0; c < cols; ++c) row[c] /= norm;
    }
    return m;
}

double max_abs_coherence(const Matrix& m) {
    double worst = 0.0;
    for (int i = 0; i < m.rows; ++i)
        for (int j = i + 1; j < m.rows; ++j)
            worst = std::max(worst, std::abs(dot(m.row(i), m.row(j), m.cols)));
    return worst;
}

}  // namespace

Codebook Codebook::build(const Vocabulary& vocab, uint64_t seed) {
    return build(vocab.n_entities(), vocab.n_attributes(), vocab.n_predicates(), seed);
}

Codebook Codebook::build(int n_entities, int n_attributes, int n_predicates, uint64_t seed,
                         int latent_dim, int channel_dim, int slots) {
    if (latent_dim % 4 != 0 || channel_dim % 4 != 0 || latent_dim % channel_dim != 0)
        throw ConfigError("codebook: latent_dim must be a multiple of 4 and of channel_dim");
    if (slots < 1 || slots > 32) throw ConfigError("codebook: slots must be in [1, 32]");

    Codebook cb;
    cb.latent_dim_ = latent_dim;
    cb.channel_dim_ = channel_dim;
    cb.slots_ = slots;
    cb.seed_ = seed;

    const int b1 = latent_dim / 4;   // subject block
    const int b2 = latent_dim / 4;   // object block
    const int b3 = latent_dim / 2;   // predicate block
    const int c1 = channel_dim / 4;
    const int c2 = channel_dim / 4;
    const int c3 = channel_dim / 2;
    const double scale = std::sqrt(static_cast<double>(latent_dim) / channel_dim);

    // block-diagonal projection aligned with the relation row layout
    {
        Rng rng(derive_seed(seed, 0x9107ULL));
        const Matrix q1 = random_orthonormal_rows(c1, b1, rng);
        const Matrix q2 = random_orthonormal_rows(c2, b2, rng);
        const Matrix q3 = random_orthonormal_rows(c3, b3, rng);
        cb.projection_ = Matrix(channel_dim, latent_dim);
        auto place = [&](const Matrix& q, int row0, int col0) {
            for (int r = 0; r < q.rows; ++r)
                for (int c = 0; c < q.cols; ++c)
                    cb.projection_.at(row0 + r, col0 + c) = scale * q.at(r, c);
        };
        place(q1, 0, 0);
        place(q2, c1, b1);
        place(q3, c1 + c2, b1 + b2);
    }

    // Rejection-sample a family of unit codewords whose compressed filters all
    // land in the norm window and stay pairwise separated. `offsets` lists the
    // latent positions the codeword is used at (two for pair codes).
    auto sample_family = [&](int count, int dim, const std::vector<int>& offsets,
                             uint64_t family_tag) {
        for (uint64_t attempt = 0;; ++attempt) {
            Rng rng(derive_seed(seed, family_tag, attempt));
            Matrix family(count, dim);
            std::vector<Matrix> filters(offsets.size(), Matrix(count, cb.channel_dim_));
            std::vector<double> embedded(cb.latent_dim_);
            std::vector<double> candidate(dim);
            std::vector<double> filt(cb.channel_dim_);
            for (int idx = 0; idx < count; ++idx) {
                bool placed = false;
                for (int tries = 0; tries < 200000 && !placed; ++tries) {
                    for (double& v : candidate) v = rng.gaussian();
                    const double norm = std::sqrt(dot(candidate.data(), candidate.data(), dim));
                    for (double& v : candidate) v /= norm;
                    bool ok = true;
                    std::vector<std::vector<double>> cand_filters;
                    for (size_t oi = 0; oi < offsets.size() && ok; ++oi) {
                        std::fill(embedded.begin(), embedded.end(), 0.0);
                        std::copy(candidate.begin(), candidate.end(),
                                  embedded.begin() + offsets[oi]);
                        kernels::project_rows_serial(embedded.data(), 1, cb.latent_dim_,
                                                     cb.projection_.data.data(), cb.channel_dim_,
                                                     filt.data());
                        const double norm2 = dot(filt.data(), filt.data(), cb.channel_dim_);
                        if (norm2 < kRejectNormLow || norm2 > kRejectNormHigh) {
                            ok = false;
                            break;
                        }
                        for (int prev = 0; prev < idx && ok; ++prev)
                            if (std::abs(dot(filt.data(), filters[oi].row(prev),
                                             cb.channel_dim_)) > kRejectCoherence)
                                ok = false;
                        if (ok) cand_filters.push_back(filt);
                    }
                    if (!ok) continue;
                    std::copy(candidate.begin(), candidate.end(), family.row(idx));
                    for (size_t oi = 0; oi < offsets.size(); ++oi)
                        std::copy(cand_filters[oi].begin(), cand_filters[oi].end(),
                                  filters[oi].row(idx));
                    placed = true;
                }
                if (!placed)
                    throw ConfigError("codebook: rejection sampling stalled; family too large "
                                      "for the channel dimension");
            }
            // original-domain separation; resample the family from the next
            // derived seed in the (practically unreachable) violation case
            if (max_abs_coherence(family) <= kMaxFamilyCoherence) return family;
            if (attempt > 64) throw ConfigError("codebook: cannot satisfy family coherence");
        }
    };

    cb.entity_ = sample_family(n_entities, latent_dim, {0}, 0xe17ULL);
    cb.attribute_ = sample_family(n_attributes, latent_dim, {0}, 0xa77ULL);
    cb.predicate_ = sample_family(n_predicates, b3, {b1 + b2}, 0x93edULL);
    cb.pair_ = sample_family(slots, b1, {0, b1}, 0x9a13ULL);

    cb.build_derived();
    return cb;
}

void Codebook::build_derived() {
    const int d = latent_dim_;
    const int b1 = d / 4;

    auto project_embedded = [&](const Matrix& family, int offset, const Matrix& proj) {
        Matrix out(family.rows, proj.rows);
        std::vector<double> embedded(proj.cols, 0.0);
        for (int r = 0; r < family.rows; ++r) {
            std::fill(embedded.begin(), embedded.end(), 0.0);
            std::copy(family.row(r), family.row(r) + family.cols, embedded.begin() + offset);
            kernels::project_rows_serial(embedded.data(), 1, proj.cols, proj.data.data(),
                                         proj.rows, out.row(r));
        }
        return out;
    };

    stream_bank_.sym_dim = channel_dim_;
    stream_bank_.entity = project_embedded(entity_, 0, projection_);
    stream_bank_.attribute = project_embedded(attribute_, 0, projection_);
    stream_bank_.subject = project_embedded(pair_, 0, projection_);
    stream_bank_.object_pos = project_embedded(pair_, b1, projection_);
    stream_bank_.predicate = project_embedded(predicate_, b1 + b1, projection_);

    // uniform-analog projections over the concatenated [obj|attr|rel] row
    for (int level = 0; level < 3; ++level) {
        const int sym = channel_dim_ * (level + 1);
        Rng rng(derive_seed(seed_, 0x07a1ULL, static_cast<uint64_t>(level)));
        Matrix q = random_orthonormal_rows(sym, 3 * d, rng);
        const double scale = std::sqrt(static_cast<double>(3 * d) / sym);
        for (double& v : q.data) v *= scale;
        uniform_projection_[level] = std::move(q);

        FilterBank& bank = uniform_bank_[level];
        bank.sym_dim = sym;
        const Matrix& u = uniform_projection_[level];
        bank.entity = project_embedded(entity_, 0, u);
        bank.attribute = project_embedded(attribute_, d, u);
        bank.subject = project_embedded(pair_, 2 * d, u);
        bank.object_pos = project_embedded(pair_, 2 * d + b1, u);
        bank.predicate = project_embedded(predicate_, 2 * d + 2 * b1, u);
    }
}

const Matrix& Codebook::uniform_projection(int sym_per_slot) const {
    for (int level = 0; level < 3; ++level)
        if (channel_dim_ * (level + 1) == sym_per_slot) return uniform_projection_[level];
    throw ConfigError("codebook: no uniform projection for " + std::to_string(sym_per_slot) +
                      " symbols per slot");
}

const FilterBank& Codebook::uniform_filters(int sym_per_slot) const {
    for (int level = 0; level < 3; ++level)
        if (channel_dim_ * (level + 1) == sym_per_slot) return uniform_bank_[level];
    throw ConfigError("codebook: no uniform filter bank for " + std::to_string(sym_per_slot) +
                      " symbols per slot");
}

void Codebook::write_entity_row(int category, double scale, double* row) const {
    std::fill(row, row + latent_dim_, 0.0);
    const double* c = entity_.row(category);
    for (int i = 0; i < latent_dim_; ++i) row[i] = scale * c[i];
}

void Codebook::write_attribute_row(int attribute, double scale, double* row) const {
    std::fill(row, row + latent_dim_, 0.0);
    const double* c = attribute_.row(attribute);
    for (int i = 0; i < latent_dim_; ++i) row[i] = scale * c[i];
}

void Codebook::write_relation_row(int subject_slot, int object_slot, int predicate, double scale,
                                  double* row) const {
    const int b1 = latent_dim_ / 4;
    std::fill(row, row + latent_dim_, 0.0);
    const double* su = pair_.row(subject_slot);
    const double* ov = pair_.row(object_slot);
    const double* pr = predicate_.row(predicate);
    const double w = scale * kRelWeight;
    for (int i = 0; i < b1; ++i) row[i] = w * su[i];
    for (int i = 0; i < b1; ++i) row[b1 + i] = w * ov[i];
    for (int i = 0; i < latent_dim_ / 2; ++i) row[2 * b1 + i] = w * pr[i];
}

std::vector<std::string> Codebook::verify() const {
    std::vector<std::string> problems;
    auto check_unit = [&](const Matrix& m, const char* name) {
        for (int r = 0; r < m.rows; ++r) {
            const double n2 = dot(m.row(r), m.row(r), m.cols);
            if (std::abs(std::sqrt(n2) - 1.0) > 1e-9)
                problems.push_back(std::string(name) + " codeword " + std::to_string(r) +
                                   " is not unit norm");
        }
    };
    check_unit(entity_, "entity");
    check_unit(attribute_, "attribute");
    check_unit(predicate_, "predicate");
    check_unit(pair_, "pair");

    auto check_coherence = [&](const Matrix& m, const char* name) {
        if (max_abs_coherence(m) > kMaxFamilyCoherence)
            problems.push_back(std::string(name) + " family coherence exceeds 0.5");
    };
    check_coherence(entity_, "entity");
    check_coherence(attribute_, "attribute");
    check_coherence(predicate_, "predicate");
    check_coherence(pair_, "pair");

    const double want = static_cast<double>(latent_dim_) / channel_dim_;
    for (int i = 0; i < channel_dim_; ++i)
        for (int j = 0; j < channel_dim_; ++j) {
            const double v = dot(projection_.row(i), projection_.row(j), latent_dim_);
            const double expect = i == j ? want : 0.0;
            if (std::abs(v - expect) > 1e-6) {
                problems.push_back("projection rows are not orthogonal with scale sqrt(D/D_c)");
                i = channel_dim_;
                break;
            }
        }

    // round-trip distortion <decompress(compress(c)), c> = |P c|^2 for every
    // filter position a codeword is used at
    auto check_roundtrip = [&](const Matrix& bank, const char* name) {
        for (int r = 0; r < bank.rows; ++r) {
            const double n2 = dot(bank.row(r), bank.row(r), bank.cols);
            if (n2 < kDistortionLow || n2 > kDistortionHigh)
                problems.push_back(std::string(name) + " filter " + std::to_string(r) +
                                   " round-trip distortion out of [0.65, 1.35]");
        }
    };
    check_roundtrip(stream_bank_.entity, "entity");
    check_roundtrip(stream_bank_.attribute, "attribute");
    check_roundtrip(stream_bank_.subject, "subject pair");
    check_roundtrip(stream_bank_.object_pos, "object pair");
    check_roundtrip(stream_bank_.predicate, "predicate");
    return problems;
}

namespace {

constexpr char kMagic[4] = {'O', 'A', 'R', 'C'};
constexpr uint32_t kVersion = 1;

void write_u32(std::ofstream& out, uint32_t v) {
    unsigned char b[4];
    for (int i = 0; i < 4; ++i) b[i] = static_cast<unsigned char>((v >> (8 * i)) & 0xff);
    out.write(reinterpret_cast<const char*>(b), 4);
}

void write_u64(std::ofstream& out, uint64_t v) {
    unsigned char b[8];
    for (int i = 0; i < 8; ++i) b[i] = static_cast<unsigned char>((v >> (8 * i)) & 0xff);
    out.write(reinterpret_cast<const char*>(b), 8);
}

uint32_t read_u32(std::ifstream& in) {
    unsigned char b[4];
    in.read(reinterpret_cast<char*>(b), 4);
    uint32_t v = 0;
    for (int i = 0; i < 4; ++i) v |= static_cast<uint32_t>(b[i]) << (8 * i);
    return v;
}

uint64_t read_u64(std::ifstream& in) {
    unsigned char b[8];
    in.read(reinterpret_cast<char*>(b), 8);
    uint64_t v = 0;
    for (int i = 0; i < 8; ++i) v |= static_cast<uint64_t>(b[i]) << (8 * i);
    return v;
}

void write_matrix(std::ofstream& out, const Matrix& m) {
    for (double d : m.data) {
        uint64_t bits;
        std::memcpy(&bits, &d, 8);
        write_u64(out, bits);
    }
}

Matrix read_matrix(std::ifstream& in, int rows, int cols) {
    Matrix m(rows, cols);
    for (double& d : m.data) {
        const uint64_t bits = read_u64(in);
        std::memcpy(&d, &bits, 8);
    }
    return m;
}

}  // namespace

void Codebook::save(const std::string& path) const {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot write codebook file: " + path);
    out.write(kMagic, 4);
    write_u32(out, kVersion);
    write_u32(out, static_cast<uint32_t>(latent_dim_));
    write_u32(out, static_cast<uint32_t>(channel_dim_));
    write_u32(out, static_cast<uint32_t>(slots_));
    write_u32(out, static_cast<uint32_t>(entity_.rows));
    write_u32(out, static_cast<uint32_t>(attribute_.rows));
    write_u32(out, static_cast<uint32_t>(predicate_.rows));
    write_u32(out, static_cast<uint32_t>(pair_.rows));
    write_u64(out, seed_);
    write_matrix(out, entity_);
    write_matrix(out, attribute_);
    write_matrix(out, predicate_);
    write_matrix(out, pair_);
    write_matrix(out, projection_);
    if (!out) throw IoError("short write on codebook file: " + path);
}

Codebook Codebook::load(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open codebook file: " + path);
    char magic[4];
    in.read(magic, 4);
    if (!in || std::memcmp(magic, kMagic, 4) != 0)
        throw ConfigError("codebook file has wrong magic: " + path);
    const uint32_t version = read_u32(in);
    if (version != kVersion)
        throw ConfigError("unsupported codebook version " + std::to_string(version));
    Codebook cb;
    cb.latent_dim_ = static_cast<int>(read_u32(in));
    cb.channel_dim_ = static_cast<int>(read_u32(in));
    cb.slots_ = static_cast<int>(read_u32(in));
    const int n_entity = static_cast<int>(read_u32(in));
    const int n_attr = static_cast<int>(read_u32(in));
    const int n_pred = static_cast<int>(read_u32(in));
    const int n_pair = static_cast<int>(read_u32(in));
    cb.seed_ = read_u64(in);
    cb.entity_ = read_matrix(in, n_entity, cb.latent_dim_);
    cb.attribute_ = read_matrix(in, n_attr, cb.latent_dim_);
    cb.predicate_ = read_matrix(in, n_pred, cb.latent_dim_ / 2);
    cb.pair_ = read_matrix(in, n_pair, cb.latent_dim_ / 4);
    cb.projection_ = read_matrix(in, cb.channel_dim_, cb.latent_dim_);
    if (!in) throw ConfigError("codebook file truncated: " + path);
    cb.build_derived();
    const auto problems = cb.verify();
    if (!problems.empty())
        throw ConfigError("codebook file fails validation: " + problems.front());
    return cb;
}

}  // namespace oarlink
