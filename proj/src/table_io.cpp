#include "scatter/table_io.hpp"

#include <cstdio>
#include <cstring>
#include <fstream>
#include <numeric>
#include <vector>

#include "scatter/errors.hpp"
#include "scatter/version.hpp"

namespace scatter {

namespace {

constexpr char kMagic[8] = {'P', 'S', 'C', 'A', 'T', 'N', 'T', '\0'};
constexpr std::uint64_t kFnvOffset = 1469598103934665603ull;
constexpr std::uint64_t kFnvPrime = 1099511628211ull;

struct Writer {
    std::vector<std::uint8_t> buf;

    void bytes(const void* p, std::size_t n) {
        const auto* b = static_cast<const std::uint8_t*>(p);
        buf.insert(buf.end(), b, b + n);
    }
    void u8(std::uint8_t v) { buf.push_back(v); }
    void u16(std::uint16_t v) { bytes(&v, 2); }
    void f64(double v) { bytes(&v, 8); }
    void u64(std::uint64_t v) { bytes(&v, 8); }
    void varint(std::uint64_t v) {
        while (v >= 0x80) {
            buf.push_back(static_cast<std::uint8_t>(v) | 0x80);
            v >>= 7;
        }
        buf.push_back(static_cast<std::uint8_t>(v));
    }
    void str(const std::string& s) {
        varint(s.size());
        bytes(s.data(), s.size());
    }
};

struct Reader {
    const std::uint8_t* p;
    const std::uint8_t* end;

    void need(std::size_t n) const {
        if (static_cast<std::size_t>(end - p) < n) throw TableIoError(IoErrorKind::Corrupt, "truncated table file");
    }
    void bytes(void* out, std::size_t n) {
        need(n);
        std::memcpy(out, p, n);
        p += n;
    }
    std::uint8_t u8() {
        need(1);
        return *p++;
    }
    std::uint16_t u16() {
        std::uint16_t v;
        bytes(&v, 2);
        return v;
    }
    double f64() {
        double v;
        bytes(&v, 8);
        return v;
    }
    std::uint64_t u64() {
        std::uint64_t v;
        bytes(&v, 8);
        return v;
    }
    std::uint64_t varint() {
        std::uint64_t v = 0;
        int shift = 0;
        while (true) {
            need(1);
            std::uint8_t b = *p++;
            v |= static_cast<std::uint64_t>(b & 0x7f) << shift;
            if (!(b & 0x80)) return v;
            shift += 7;
            if (shift > 63) throw TableIoError(IoErrorKind::Corrupt, "varint overflow");
        }
    }
    std::string str() {
        std::uint64_t n = varint();
        need(n);
        std::string s(reinterpret_cast<const char*>(p), n);
        p += n;
        return s;
    }
};

std::uint64_t fnv1a(const std::uint8_t* p, std::size_t n, std::uint64_t h = kFnvOffset) {
    for (std::size_t i = 0; i < n; ++i) {
        h ^= p[i];
        h *= kFnvPrime;
    }
    return h;
}

void write_aspect(Writer& w, const Aspect& a) {
    w.u8(a.exact ? 1 : 0);
    if (a.exact) {
        w.u64(static_cast<std::uint64_t>(a.num));
        w.u64(static_cast<std::uint64_t>(a.den));
    } else {
        w.str(a.text);
    }
}

Aspect read_aspect(Reader& r) {
    if (r.u8()) {
        auto num = static_cast<std::int64_t>(r.u64());
        auto den = static_cast<std::int64_t>(r.u64());
        return Aspect::rational(num, den);
    }
    return Aspect::irrational(r.str());
}

}  // namespace

void save_table(const std::string& path, const NormTable& t) {
    Writer w;
    w.bytes(kMagic, 8);
    w.u16(static_cast<std::uint16_t>(kTableFormatVersion));
    w.u8(static_cast<std::uint8_t>(t.torus().dimension));
    w.u8(t.exact() ? 1 : 0);
    write_aspect(w, t.torus().a2);
    if (t.torus().dimension == 3) write_aspect(w, t.torus().b2);
    w.f64(t.cutoff());
    w.f64(t.collision_rel_tol());
    w.u64(t.size());
    if (t.exact()) {
        std::int64_t prev = 0;
        for (std::size_t i = 0; i < t.size(); ++i) {
            w.varint(static_cast<std::uint64_t>(t.key(i) - prev));
            prev = t.key(i);
            w.varint(static_cast<std::uint64_t>(t.mult(i)));
        }
    } else {
        for (std::size_t i = 0; i < t.size(); ++i) {
            const auto& o = t.orbit(i);
            w.varint(static_cast<std::uint64_t>(o[0]));
            w.varint(static_cast<std::uint64_t>(o[1]));
            w.varint(static_cast<std::uint64_t>(o[2]));
        }
    }
    w.u64(fnv1a(w.buf.data(), w.buf.size()));

    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw TableIoError(IoErrorKind::OpenFailed, "cannot open for writing: " + path);
    out.write(reinterpret_cast<const char*>(w.buf.data()), static_cast<std::streamsize>(w.buf.size()));
    if (!out) throw TableIoError(IoErrorKind::Corrupt, "short write: " + path);
}

NormTable load_table(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw TableIoError(IoErrorKind::OpenFailed, "cannot open: " + path);
    std::vector<std::uint8_t> buf((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    if (buf.size() < 8 + 2 + 8) throw TableIoError(IoErrorKind::Corrupt, "file too short: " + path);

    const std::uint64_t stored = fnv1a(buf.data(), buf.size() - 8);
    std::uint64_t trailer;
    std::memcpy(&trailer, buf.data() + buf.size() - 8, 8);
    if (stored != trailer) throw TableIoError(IoErrorKind::Corrupt, "checksum mismatch: " + path);

    Reader r{buf.data(), buf.data() + buf.size() - 8};
    char magic[8];
    r.bytes(magic, 8);
    if (std::memcmp(magic, kMagic, 8) != 0) throw TableIoError(IoErrorKind::BadMagic, "not a norm table: " + path);
    const std::uint16_t version = r.u16();
    if (version != kTableFormatVersion)
        throw TableIoError(IoErrorKind::VersionMismatch,
                           "table format version " + std::to_string(version) + " unsupported");

    const int dim = r.u8();
    const bool exact = r.u8() != 0;
    Aspect a2 = read_aspect(r);
    TorusSpec torus = dim == 3 ? TorusSpec::box3d(a2, read_aspect(r)) : TorusSpec::rect2d(a2);
    if (torus.exact() != exact) throw TableIoError(IoErrorKind::Corrupt, "exactness flag mismatch");

    NormTable t;
    t.torus_ = torus;
    t.cutoff_ = r.f64();
    t.collision_rel_tol_ = r.f64();
    t.exact_ = exact;
    const std::uint64_t count = r.u64();
    if (count > (1ull << 40)) throw TableIoError(IoErrorKind::Corrupt, "implausible entry count");

    if (exact) {
        const std::int64_t scale = torus.key_scale();
        std::int64_t key = 0;
        for (std::uint64_t i = 0; i < count; ++i) {
            key += static_cast<std::int64_t>(r.varint());
            t.key_.push_back(key);
            t.value_.push_back(to_double(static_cast<BigFloat>(key) / scale));
            t.mult_.push_back(static_cast<std::int64_t>(r.varint()));
        }
    } else {
        for (std::uint64_t i = 0; i < count; ++i) {
            auto m = static_cast<std::int32_t>(r.varint());
            auto n = static_cast<std::int32_t>(r.varint());
            auto k = static_cast<std::int32_t>(r.varint());
            t.orbit_.push_back({m, n, k});
            t.value_.push_back(to_double(orbit_norm(torus, m, n, k)));
            t.mult_.push_back((m > 0 ? 2 : 1) * (n > 0 ? 2 : 1) * (k > 0 ? 2 : 1));
        }
    }
    if (r.p != r.end) throw TableIoError(IoErrorKind::Corrupt, "trailing bytes in table file");
    try {
        t.finalize({});
    } catch (const Error& e) {
        throw TableIoError(IoErrorKind::Corrupt, std::string("inconsistent table payload: ") + e.what());
    }
    return t;
}

std::string format_norm(const NormTable& table, std::size_t index) {
    char buf[64];
    if (table.exact()) {
        const std::int64_t scale = table.torus().key_scale();
        std::int64_t num = table.key(index);
        std::int64_t g = std::gcd(num, scale);
        const std::int64_t den = scale / (g == 0 ? 1 : g);
        if (g != 0) num /= g;
        if (den == 1)
            std::snprintf(buf, sizeof buf, "%lld", static_cast<long long>(num));
        else
            std::snprintf(buf, sizeof buf, "%lld/%lld", static_cast<long long>(num),
                          static_cast<long long>(den));
    } else {
        std::snprintf(buf, sizeof buf, "%.17g", table.value(index));
    }
    return buf;
}

void write_table_csv(const std::string& path, const NormTable& t) {
    std::ofstream out(path, std::ios::trunc);
    if (!out) throw TableIoError(IoErrorKind::OpenFailed, "cannot open for writing: " + path);
    out << "norm,multiplicity\n";
    for (std::size_t i = 0; i < t.size(); ++i)
        out << format_norm(t, i) << ',' << t.mult(i) << '\n';
    if (!out) throw TableIoError(IoErrorKind::Corrupt, "short write: " + path);
}

std::uint64_t file_checksum(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw TableIoError(IoErrorKind::OpenFailed, "cannot open: " + path);
    std::uint64_t h = kFnvOffset;
    char chunk[65536];
    while (in.read(chunk, sizeof chunk) || in.gcount() > 0)
        h = fnv1a(reinterpret_cast<const std::uint8_t*>(chunk), static_cast<std::size_t>(in.gcount()), h);
    return h;
}

}  // namespace scatter
