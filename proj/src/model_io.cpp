#include "lvlm/model_io.hpp"

#include <cstdlib>
#include <fstream>
#include <istream>
#include <map>
#include <ostream>
#include <sstream>
#include <string>

#include "lvlm/error.hpp"
#include "lvlm/lattice_io.hpp"

namespace lvlm {

Decoding decode(const Model& model, const Observation& obs) {
    if (const auto* m = std::get_if<DiscreteModel>(&model)) {
        const auto* o = std::get_if<SymbolLattice>(&obs);
        if (!o) throw InputError("discrete model needs a symbol lattice");
        return decode_discrete(*m, *o);
    }
    const auto* o = std::get_if<VectorLattice>(&obs);
    if (!o) throw InputError("real model needs a vector lattice");
    return decode_real(std::get<RealModel>(model), *o);
}

double evaluate(const Model& model, const Observation& obs) {
    if (const auto* m = std::get_if<DiscreteModel>(&model)) {
        const auto* o = std::get_if<SymbolLattice>(&obs);
        if (!o) throw InputError("discrete model needs a symbol lattice");
        return evaluate_discrete(*m, *o);
    }
    const auto* o = std::get_if<VectorLattice>(&obs);
    if (!o) throw InputError("real model needs a vector lattice");
    return evaluate_real(std::get<RealModel>(model), *o);
}

std::size_t num_states(const Model& model) {
    return std::visit([](const auto& m) { return m.num_states(); }, model);
}

std::size_t model_dims(const Model& model) {
    return std::visit([](const auto& m) { return m.dims; }, model);
}

std::size_t observation_size(const Model& model) {
    if (const auto* m = std::get_if<DiscreteModel>(&model)) return m->num_symbols();
    return std::get<RealModel>(model).dim();
}

const Eigen::MatrixXd& adjacency(const Model& model) {
    return std::visit([](const auto& m) -> const Eigen::MatrixXd& { return m.A; }, model);
}

const Radii& radii(const Model& model) {
    return std::visit([](const auto& m) -> const Radii& { return m.radii; }, model);
}

const char* variant_name(const Model& model) {
    return std::holds_alternative<DiscreteModel>(model) ? "discrete" : "real";
}

namespace {

void put_values(std::ostream& out, const char* key, const Eigen::MatrixXd& m) {
    out << key << '=';
    for (Eigen::Index i = 0; i < m.rows(); ++i)
        for (Eigen::Index j = 0; j < m.cols(); ++j) out << (i || j ? " " : "") << format_double(m(i, j));
    out << '\n';
}

void put_common(std::ostream& out, const char* variant, std::size_t n, std::size_t m, std::size_t dims,
                const Radii& radii, double alpha) {
    out << "variant=" << variant << '\n'
        << "N=" << n << '\n'
        << "M=" << m << '\n'
        << "d=" << dims << '\n'
        << "w=" << radii.decode << '\n'
        << "w_e=" << radii.evaluate << '\n'
        << "w_l=" << radii.learn << '\n'
        << "alpha=" << format_double(alpha) << '\n';
}

class KeyValues {
public:
    explicit KeyValues(std::istream& in) {
        std::string line;
        std::size_t lineno = 0;
        while (std::getline(in, line)) {
            ++lineno;
            if (!line.empty() && line.back() == '\r') line.pop_back();
            const auto first = line.find_first_not_of(" \t");
            if (first == std::string::npos || line[first] == '#') continue;
            const auto eq = line.find('=');
            if (eq == std::string::npos) throw InputError("line " + std::to_string(lineno) + ": expected key=value");
            std::string key = line.substr(first, eq - first);
            while (!key.empty() && (key.back() == ' ' || key.back() == '\t')) key.pop_back();
            if (!values_.emplace(key, line.substr(eq + 1)).second) throw InputError("duplicate key '" + key + "'");
        }
    }

    const std::string& raw(const std::string& key) {
        const auto it = values_.find(key);
        if (it == values_.end()) throw InputError("missing key '" + key + "'");
        used_.insert({key, true});
        return it->second;
    }

    std::size_t size(const std::string& key) {
        std::istringstream s(raw(key));
        long long v;
        std::string rest;
        if (!(s >> v) || (s >> rest) || v < 0) throw InputError("key '" + key + "' must be a nonnegative integer");
        return static_cast<std::size_t>(v);
    }

    double real(const std::string& key) {
        const auto values = reals(key, 1);
        return values[0];
    }

    std::vector<double> reals(const std::string& key, std::size_t expected) {
        std::istringstream s(raw(key));
        std::vector<double> out;
        std::string tok;
        while (s >> tok) {
            char* end = nullptr;
            const double v = std::strtod(tok.c_str(), &end);
            if (*end != '\0') throw InputError("key '" + key + "': invalid number '" + tok + "'");
            out.push_back(v);
        }
        if (out.size() != expected)
            throw InputError("key '" + key + "' has " + std::to_string(out.size()) + " values, expected " +
                             std::to_string(expected));
        return out;
    }

    void require_all_used() const {
        for (const auto& [key, value] : values_)
            if (!used_.count(key)) throw InputError("unknown key '" + key + "'");
    }

private:
    std::map<std::string, std::string> values_;
    std::map<std::string, bool> used_;
};

Eigen::MatrixXd to_matrix(const std::vector<double>& v, std::size_t rows, std::size_t cols) {
    Eigen::MatrixXd m(static_cast<Eigen::Index>(rows), static_cast<Eigen::Index>(cols));
    for (std::size_t i = 0; i < rows; ++i)
        for (std::size_t j = 0; j < cols; ++j) m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = v[i * cols + j];
    return m;
}

}  // namespace

void write_model(std::ostream& out, const Model& model) {
    if (const auto* m = std::get_if<DiscreteModel>(&model)) {
        m->validate();
        put_common(out, "discrete", m->num_states(), m->num_symbols(), m->dims, m->radii, m->alpha);
        put_values(out, "A", m->A);
        put_values(out, "B", m->B);
        return;
    }
    const auto& m = std::get<RealModel>(model);
    m.validate();
    put_common(out, "real", m.num_states(), m.dim(), m.dims, m.radii, m.alpha);
    put_values(out, "A", m.A);
    put_values(out, "mu", m.mu);
    out << "sigma=";
    bool first = true;
    for (const auto& s : m.sigma)
        for (Eigen::Index i = 0; i < s.rows(); ++i)
            for (Eigen::Index j = 0; j < s.cols(); ++j) {
                out << (first ? "" : " ") << format_double(s(i, j));
                first = false;
            }
    out << '\n';
}

Model read_model(std::istream& in) {
    KeyValues kv(in);
    const std::string variant = kv.raw("variant");
    const std::size_t n = kv.size("N");
    const std::size_t m = kv.size("M");
    if (n == 0 || m == 0) throw InputError("model needs N >= 1 and M >= 1");
    Radii radii{kv.size("w"), kv.size("w_e"), kv.size("w_l")};
    const std::size_t dims = kv.size("d");
    const double alpha = kv.real("alpha");
    const Eigen::MatrixXd a = to_matrix(kv.reals("A", n * n), n, n);

    if (variant == "discrete") {
        DiscreteModel model{a, to_matrix(kv.reals("B", n * m), n, m), dims, radii, alpha};
        kv.require_all_used();
        model.validate();
        return model;
    }
    if (variant == "real") {
        RealModel model{a, to_matrix(kv.reals("mu", n * m), n, m), {}, dims, radii, alpha};
        const auto sigma = kv.reals("sigma", n * m * m);
        for (std::size_t j = 0; j < n; ++j)
            model.sigma.push_back(to_matrix({sigma.begin() + static_cast<std::ptrdiff_t>(j * m * m),
                                             sigma.begin() + static_cast<std::ptrdiff_t>((j + 1) * m * m)},
                                            m, m));
        kv.require_all_used();
        model.validate();
        return model;
    }
    throw InputError("unknown model variant '" + variant + "'");
}

Model read_model_file(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw InputError("cannot open " + path.string());
    return read_model(in);
}

void write_codebook(std::ostream& out, const Codebook& codebook) {
    out << "variant=codebook\n"
        << "N=" << codebook.size() << '\n'
        << "M=" << codebook.dim << '\n'
        << "centroids=";
    for (std::size_t i = 0; i < codebook.centroids.size(); ++i) out << (i ? " " : "") << format_double(codebook.centroids[i]);
    out << "\nsizes=";
    for (std::size_t i = 0; i < codebook.sizes.size(); ++i) out << (i ? " " : "") << codebook.sizes[i];
    out << '\n';
}

Codebook read_codebook(std::istream& in) {
    KeyValues kv(in);
    if (kv.raw("variant") != "codebook") throw InputError("not a codebook document");
    Codebook cb;
    const std::size_t n = kv.size("N");
    cb.dim = kv.size("M");
    cb.centroids = kv.reals("centroids", n * cb.dim);
    for (double s : kv.reals("sizes", n)) {
        if (!(s >= 1.0) || s != static_cast<double>(static_cast<std::size_t>(s)))
            throw InputError("codebook sizes must be positive integers");
        cb.sizes.push_back(static_cast<std::size_t>(s));
    }
    kv.require_all_used();
    return cb;
}

}  // namespace lvlm
