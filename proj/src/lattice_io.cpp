#include "lvlm/lattice_io.hpp"

#include <algorithm>
#include <cctype>
#include <cerrno>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <unistd.h>

#include "lvlm/error.hpp"

namespace lvlm {

namespace {

constexpr const char* kMagic = "LVLM-LATTICE";

std::string next_token(std::istream& in, const char* what) {
    std::string tok;
    if (!(in >> tok)) throw InputError(std::string("unexpected end of lattice data while reading ") + what);
    return tok;
}

std::size_t parse_size(const std::string& tok, const char* what) {
    char* end = nullptr;
    errno = 0;
    const unsigned long long v = std::strtoull(tok.c_str(), &end, 10);
    if (tok.empty() || *end != '\0' || errno != 0 || tok[0] == '-')
        throw InputError(std::string("invalid ") + what + ": '" + tok + "'");
    return static_cast<std::size_t>(v);
}

double parse_double(const std::string& tok) {
    char* end = nullptr;
    const double v = std::strtod(tok.c_str(), &end);
    if (tok.empty() || *end != '\0') throw InputError("invalid real value: '" + tok + "'");
    return v;
}

// PGM header fields are separated by whitespace and may be interleaved with
// '#' comments running to end of line.
std::size_t pgm_field(std::istream& in, const char* what) {
    for (;;) {
        const int c = in.peek();
        if (c == EOF) throw InputError(std::string("truncated PGM header at ") + what);
        if (std::isspace(c)) {
            in.get();
        } else if (c == '#') {
            std::string skip;
            std::getline(in, skip);
        } else {
            break;
        }
    }
    std::string tok;
    while (std::isdigit(in.peek())) tok.push_back(static_cast<char>(in.get()));
    if (tok.empty()) throw InputError(std::string("invalid PGM ") + what);
    return parse_size(tok, what);
}

SymbolLattice read_pgm(std::istream& in, bool binary) {
    const std::size_t width = pgm_field(in, "width");
    const std::size_t height = pgm_field(in, "height");
    const std::size_t maxval = pgm_field(in, "maxval");
    if (maxval == 0 || maxval > 255) throw InputError("only 8-bit PGM images are supported");
    SymbolLattice out{LatticeShape({height, width}), maxval + 1, std::vector<std::uint32_t>(width * height)};
    if (binary) {
        if (!std::isspace(in.get())) throw InputError("malformed P5 header");
        std::vector<char> bytes(out.symbols.size());
        if (!in.read(bytes.data(), static_cast<std::streamsize>(bytes.size())))
            throw InputError("truncated P5 pixel data");
        for (std::size_t i = 0; i < bytes.size(); ++i) out.symbols[i] = static_cast<unsigned char>(bytes[i]);
    } else {
        for (auto& s : out.symbols) s = static_cast<std::uint32_t>(parse_size(next_token(in, "pixel"), "pixel"));
    }
    out.validate();
    return out;
}

void expect_end(std::istream& in) {
    std::string extra;
    if (in >> extra) throw InputError("unexpected trailing data '" + extra + "'");
}

Observation read_native(std::istream& in) {
    const std::size_t d = parse_size(next_token(in, "dimension"), "dimension");
    if (d == 0 || d > 16) throw InputError("lattice dimension must be between 1 and 16");
    std::vector<std::size_t> lengths(d);
    for (auto& len : lengths) len = parse_size(next_token(in, "length"), "length");
    LatticeShape shape(lengths);
    const std::string dtype = next_token(in, "dtype");
    if (dtype == "u8") {
        SymbolLattice out{shape, 1, std::vector<std::uint32_t>(shape.size())};
        for (auto& s : out.symbols) {
            const std::size_t v = parse_size(next_token(in, "symbol"), "symbol");
            if (v > 255) throw InputError("u8 symbol out of range: " + std::to_string(v));
            s = static_cast<std::uint32_t>(v);
            out.alphabet = std::max<std::size_t>(out.alphabet, v + 1);
        }
        expect_end(in);
        return out;
    }
    if (dtype.rfind("f64x", 0) == 0) {
        const std::size_t m = parse_size(dtype.substr(4), "vector dimension");
        if (m == 0) throw InputError("vector dimension must be positive");
        VectorLattice out{shape, m, std::vector<double>(shape.size() * m)};
        for (auto& v : out.values) v = parse_double(next_token(in, "value"));
        expect_end(in);
        out.validate();
        return out;
    }
    throw InputError("unknown lattice dtype '" + dtype + "'");
}

}  // namespace

Observation read_lattice(std::istream& in) {
    std::string magic;
    in >> std::ws;
    if (in.peek() == 'P') {
        char p[2];
        in.read(p, 2);
        if (p[1] == '2') return read_pgm(in, false);
        if (p[1] == '5') return read_pgm(in, true);
        throw InputError("unsupported PNM variant");
    }
    if (!(in >> magic) || magic != kMagic) throw InputError("not a lattice file (expected LVLM-LATTICE or PGM)");
    return read_native(in);
}

Observation read_lattice_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw InputError("cannot open " + path.string());
    return read_lattice(in);
}

void write_lattice(std::ostream& out, const SymbolLattice& lattice) {
    lattice.validate();
    if (lattice.alphabet > 256) throw InputError("u8 lattices hold at most 256 symbols");
    out << kMagic << ' ' << lattice.shape.dims();
    for (std::size_t len : lattice.shape.lengths()) out << ' ' << len;
    out << " u8\n";
    const std::size_t row = lattice.shape.length(lattice.shape.dims() - 1);
    for (std::size_t i = 0; i < lattice.symbols.size(); ++i)
        out << lattice.symbols[i] << ((i + 1) % row == 0 ? '\n' : ' ');
}

void write_lattice(std::ostream& out, const VectorLattice& lattice) {
    lattice.validate();
    out << kMagic << ' ' << lattice.shape.dims();
    for (std::size_t len : lattice.shape.lengths()) out << ' ' << len;
    out << " f64x" << lattice.dim << '\n';
    for (std::size_t t = 0; t < lattice.shape.size(); ++t) {
        const auto v = lattice.at(t);
        for (std::size_t k = 0; k < v.size(); ++k) out << (k ? " " : "") << format_double(v[k]);
        out << '\n';
    }
}

void write_lattice(std::ostream& out, const Observation& lattice) {
    std::visit([&](const auto& l) { write_lattice(out, l); }, lattice);
}

void write_pgm(std::ostream& out, const SymbolLattice& lattice, bool binary) {
    lattice.validate();
    if (lattice.shape.dims() != 2) throw InputError("PGM output needs a 2-dimensional lattice");
    if (lattice.alphabet > 256) throw InputError("PGM output holds at most 256 symbols");
    const std::size_t height = lattice.shape.length(0), width = lattice.shape.length(1);
    const std::size_t maxval = std::max<std::size_t>(1, lattice.alphabet - 1);
    out << (binary ? "P5" : "P2") << '\n' << width << ' ' << height << '\n' << maxval << '\n';
    if (binary) {
        for (std::uint32_t s : lattice.symbols) out.put(static_cast<char>(s));
    } else {
        for (std::size_t i = 0; i < lattice.symbols.size(); ++i)
            out << lattice.symbols[i] << ((i + 1) % width == 0 ? '\n' : ' ');
    }
}

void write_state_pgm(std::ostream& out, const StateLattice& states, std::size_t num_states) {
    states.validate(num_states);
    SymbolLattice gray{states.shape, 256, std::vector<std::uint32_t>(states.states.size())};
    for (std::size_t i = 0; i < gray.symbols.size(); ++i)
        gray.symbols[i] = num_states > 1 ? static_cast<std::uint32_t>(
                                               (states.states[i] * 255 + (num_states - 1) / 2) / (num_states - 1))
                                         : 0;
    write_pgm(out, gray, true);
}

SymbolLattice states_as_symbols(const StateLattice& states, std::size_t num_states) {
    states.validate(num_states);
    return {states.shape, num_states, states.states};
}

StateLattice symbols_as_states(const SymbolLattice& symbols) { return {symbols.shape, symbols.symbols}; }

void write_file_atomic(const std::filesystem::path& path, const std::function<void(std::ostream&)>& writer) {
    std::filesystem::path tmp = path;
    tmp += ".tmp." + std::to_string(::getpid());
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw InputError("cannot write " + path.string());
        try {
            writer(out);
        } catch (...) {
            out.close();
            std::filesystem::remove(tmp);
            throw;
        }
        out.flush();
        if (!out) {
            std::filesystem::remove(tmp);
            throw InputError("write failed for " + path.string());
        }
    }
    std::error_code ec;
    std::filesystem::rename(tmp, path, ec);
    if (ec) {
        std::filesystem::remove(tmp);
        throw InputError("cannot move output into place at " + path.string() + ": " + ec.message());
    }
}

std::string format_double(double value) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", value);
    return buf;
}

}  // namespace lvlm
