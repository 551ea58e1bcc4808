#include "odl/checkpoint.hpp"

#include "odl/errors.hpp"

#include <zlib.h>

#include <bit>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <iterator>
#include <string>
#include <vector>

namespace odl {

namespace {

constexpr char kMagic[4] = {'O', 'D', 'L', '1'};
constexpr std::uint16_t kVersion = 1;

// The numeric payload is written as raw little-endian bytes. The engine only
// targets little-endian hosts; refuse to produce silently byte-swapped files
// elsewhere.
static_assert(std::endian::native == std::endian::little,
              "checkpoint format requires a little-endian host");

class Writer {
public:
    void raw(const void* data, std::size_t n) {
        const char* c = static_cast<const char*>(data);
        buf_.insert(buf_.end(), c, c + n);
    }
    void u16(std::uint16_t v) { raw(&v, sizeof v); }
    void u64(std::uint64_t v) { raw(&v, sizeof v); }
    void f64(double v) { raw(&v, sizeof v); }
    void f64s(const double* v, std::size_t n) { raw(v, n * sizeof(double)); }

    std::vector<char>& bytes() { return buf_; }

private:
    std::vector<char> buf_;
};

class Reader {
public:
    Reader(const std::vector<char>& buf, std::size_t begin, std::size_t end)
        : buf_(buf), pos_(begin), end_(end) {}

    void raw(void* out, std::size_t n) {
        if (pos_ + n > end_) {
            throw CheckpointError("checkpoint is truncated or corrupt");
        }
        std::memcpy(out, buf_.data() + pos_, n);
        pos_ += n;
    }
    std::uint16_t u16() { std::uint16_t v; raw(&v, sizeof v); return v; }
    std::uint64_t u64() { std::uint64_t v; raw(&v, sizeof v); return v; }
    double f64() { double v; raw(&v, sizeof v); return v; }
    void f64s(double* out, std::size_t n) { raw(out, n * sizeof(double)); }

    /// Read an element count and verify the section can actually hold that
    /// many items, so corrupt counts fail cleanly instead of over-allocating.
    std::size_t count(std::size_t elem_size) {
        const std::uint64_t n = u64();
        if (elem_size > 0 && n > (end_ - pos_) / elem_size) {
            throw CheckpointError("checkpoint is truncated or corrupt");
        }
        return static_cast<std::size_t>(n);
    }

    std::size_t pos() const { return pos_; }
    bool done() const { return pos_ == end_; }

private:
    const std::vector<char>& buf_;
    std::size_t pos_;
    std::size_t end_;
};

// Each section is written as u64 payload length + payload, so readers can
// skip or bound-check without knowing the interior layout.
class SectionWriter {
public:
    explicit SectionWriter(Writer& w) : w_(w) {}

    void begin() { start_ = w_.bytes().size(); w_.u64(0); }
    void end() {
        const std::uint64_t len = w_.bytes().size() - start_ - sizeof(std::uint64_t);
        std::memcpy(w_.bytes().data() + start_, &len, sizeof len);
    }

private:
    Writer& w_;
    std::size_t start_ = 0;
};

Reader open_section(const std::vector<char>& buf, std::size_t& cursor, std::size_t limit) {
    if (cursor + sizeof(std::uint64_t) > limit) {
        throw CheckpointError("checkpoint is truncated or corrupt");
    }
    std::uint64_t len;
    std::memcpy(&len, buf.data() + cursor, sizeof len);
    cursor += sizeof len;
    if (cursor + len > limit) {
        throw CheckpointError("checkpoint is truncated or corrupt");
    }
    Reader r(buf, cursor, cursor + len);
    cursor += len;
    return r;
}

std::uint32_t crc_of(const std::vector<char>& buf, std::size_t n) {
    return static_cast<std::uint32_t>(
        ::crc32(0L, reinterpret_cast<const Bytef*>(buf.data()), static_cast<uInt>(n)));
}

void write_solve_report(Writer& w, const SolveReport& rep) {
    w.u64(static_cast<std::uint64_t>(rep.iterations));
    w.f64(rep.final_grad_norm);
    w.u64(rep.converged ? 1 : 0);
}

SolveReport read_solve_report(Reader& r) {
    SolveReport rep;
    rep.iterations = static_cast<long>(r.u64());
    rep.final_grad_norm = r.f64();
    rep.converged = r.u64() != 0;
    return rep;
}

} // namespace

void write_checkpoint(const EngineState& state, const std::string& path) {
    Writer w;
    w.raw(kMagic, sizeof kMagic);
    w.u16(kVersion);
    SectionWriter sec(w);

    // dims
    sec.begin();
    w.u64(static_cast<std::uint64_t>(state.p));
    sec.end();
    // S, row-major; S is kept exactly symmetric, so the column-major storage
    // can be emitted directly.
    sec.begin();
    w.f64s(state.S.data(), static_cast<std::size_t>(state.S.size()));
    sec.end();
    // U
    sec.begin();
    w.f64s(state.U.data(), static_cast<std::size_t>(state.U.size()));
    sec.end();
    // yy
    sec.begin();
    w.f64(state.yy);
    sec.end();
    // N
    sec.begin();
    w.u64(static_cast<std::uint64_t>(state.N));
    sec.end();
    // b
    sec.begin();
    w.u64(static_cast<std::uint64_t>(state.b));
    sec.end();
    // lasso tracks
    sec.begin();
    w.u64(state.lasso.size());
    for (const auto& t : state.lasso) {
        w.f64(t.lambda);
        w.u64(static_cast<std::uint64_t>(t.beta.size()));
        w.f64s(t.beta.data(), static_cast<std::size_t>(t.beta.size()));
        w.f64(t.sigma2);
        write_solve_report(w, t.last_report);
    }
    sec.end();
    // projection tracks
    sec.begin();
    w.u64(state.projections.size());
    for (const auto& t : state.projections) {
        w.u64(static_cast<std::uint64_t>(t.r));
        w.u64(static_cast<std::uint64_t>(t.gamma.size()));
        w.f64s(t.gamma.data(), static_cast<std::size_t>(t.gamma.size()));
        w.f64(t.a1);
        w.f64(t.a2);
        w.u64(static_cast<std::uint64_t>(t.A1.size()));
        w.f64s(t.A1.data(), static_cast<std::size_t>(t.A1.size()));
        w.f64(t.zz);
        write_solve_report(w, t.last_report);
    }
    sec.end();
    // tuning history + selected-path sigma2
    sec.begin();
    w.u64(state.mode == GridMode::fixed ? 0 : 1);
    w.u64(state.grid.size());
    w.f64s(state.grid.data(), state.grid.size());
    w.u64(state.selected.size());
    w.f64s(state.selected.data(), state.selected.size());
    w.u64(state.pe_table.size());
    for (const auto& row : state.pe_table) {
        w.u64(row.size());
        w.f64s(row.data(), row.size());
    }
    w.f64(state.sigma2);
    sec.end();

    const std::uint32_t crc = crc_of(w.bytes(), w.bytes().size());
    w.raw(&crc, sizeof crc);

    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) {
        throw DataError("cannot open checkpoint for writing: " + path);
    }
    out.write(w.bytes().data(), static_cast<std::streamsize>(w.bytes().size()));
    if (!out) {
        throw DataError("failed to write checkpoint: " + path);
    }
}

EngineState read_checkpoint(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw CheckpointError("cannot open checkpoint: " + path);
    }
    std::vector<char> buf((std::istreambuf_iterator<char>(in)),
                          std::istreambuf_iterator<char>());

    if (buf.size() < sizeof kMagic + sizeof(std::uint16_t) + sizeof(std::uint32_t)) {
        throw CheckpointError("checkpoint is truncated or corrupt");
    }
    if (std::memcmp(buf.data(), kMagic, sizeof kMagic) != 0) {
        throw CheckpointError("checkpoint version mismatch: bad magic bytes");
    }
    std::uint16_t version;
    std::memcpy(&version, buf.data() + sizeof kMagic, sizeof version);
    if (version != kVersion) {
        throw CheckpointError("checkpoint version mismatch: got version " +
                              std::to_string(version) + ", expected " +
                              std::to_string(kVersion));
    }

    const std::size_t body_end = buf.size() - sizeof(std::uint32_t);
    std::uint32_t stored_crc;
    std::memcpy(&stored_crc, buf.data() + body_end, sizeof stored_crc);
    if (crc_of(buf, body_end) != stored_crc) {
        throw CheckpointError("checkpoint checksum failure");
    }

    std::size_t cursor = sizeof kMagic + sizeof version;
    EngineState st;

    Reader dims = open_section(buf, cursor, body_end);
    st.p = static_cast<long>(dims.u64());
    const long max_p = 1L << 20;
    if (st.p < 0 || st.p > max_p) throw CheckpointError("checkpoint dims are corrupt");

    Reader s_sec = open_section(buf, cursor, body_end);
    if (static_cast<std::uint64_t>(st.p) * static_cast<std::uint64_t>(st.p) >
        buf.size() / sizeof(double)) {
        throw CheckpointError("checkpoint is truncated or corrupt");
    }
    st.S.resize(st.p, st.p);
    s_sec.f64s(st.S.data(), static_cast<std::size_t>(st.S.size()));

    Reader u_sec = open_section(buf, cursor, body_end);
    st.U.resize(st.p);
    u_sec.f64s(st.U.data(), static_cast<std::size_t>(st.U.size()));

    Reader yy_sec = open_section(buf, cursor, body_end);
    st.yy = yy_sec.f64();

    Reader n_sec = open_section(buf, cursor, body_end);
    st.N = static_cast<long>(n_sec.u64());

    Reader b_sec = open_section(buf, cursor, body_end);
    st.b = static_cast<long>(b_sec.u64());

    Reader lasso = open_section(buf, cursor, body_end);
    st.lasso.resize(lasso.count(sizeof(double)));
    for (auto& t : st.lasso) {
        t.lambda = lasso.f64();
        const std::size_t len = lasso.count(sizeof(double));
        t.beta.resize(static_cast<long>(len));
        lasso.f64s(t.beta.data(), len);
        t.sigma2 = lasso.f64();
        t.last_report = read_solve_report(lasso);
    }

    Reader proj = open_section(buf, cursor, body_end);
    st.projections.resize(proj.count(sizeof(double)));
    for (auto& t : st.projections) {
        t.r = static_cast<long>(proj.u64());
        const std::size_t glen = proj.count(sizeof(double));
        t.gamma.resize(static_cast<long>(glen));
        proj.f64s(t.gamma.data(), glen);
        t.a1 = proj.f64();
        t.a2 = proj.f64();
        const std::size_t alen = proj.count(sizeof(double));
        t.A1.resize(static_cast<long>(alen));
        proj.f64s(t.A1.data(), alen);
        t.zz = proj.f64();
        t.last_report = read_solve_report(proj);
    }

    Reader tun = open_section(buf, cursor, body_end);
    st.mode = tun.u64() == 0 ? GridMode::fixed : GridMode::scaled;
    st.grid.resize(tun.count(sizeof(double)));
    tun.f64s(st.grid.data(), st.grid.size());
    st.selected.resize(tun.count(sizeof(double)));
    tun.f64s(st.selected.data(), st.selected.size());
    st.pe_table.resize(tun.count(sizeof(double)));
    for (auto& row : st.pe_table) {
        row.resize(tun.count(sizeof(double)));
        tun.f64s(row.data(), row.size());
    }
    st.sigma2 = tun.f64();

    if (cursor != body_end) {
        throw CheckpointError("checkpoint has trailing bytes");
    }
    return st;
}

} // namespace odl
