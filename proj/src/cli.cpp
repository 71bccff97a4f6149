#include "lvlm/cli.hpp"

#include <cstdlib>
#include <fstream>
#include <optional>
#include <ostream>
#include <sstream>
#include <thread>

#include <CLI11.hpp>

#include "lvlm/classify.hpp"
#include "lvlm/error.hpp"
#include "lvlm/indices.hpp"
#include "lvlm/lattice_io.hpp"
#include "lvlm/model_io.hpp"
#include "lvlm/random.hpp"
#include "lvlm/synth.hpp"

namespace lvlm {

namespace {

LatticeShape parse_shape(const std::string& text) {
    std::vector<std::size_t> lengths;
    std::stringstream s(text);
    std::string part;
    while (std::getline(s, part, 'x')) {
        char* end = nullptr;
        const unsigned long long v = std::strtoull(part.c_str(), &end, 10);
        if (part.empty() || *end != '\0' || v == 0) throw InputError("invalid shape '" + text + "' (expected e.g. 64x64)");
        lengths.push_back(static_cast<std::size_t>(v));
    }
    return LatticeShape(std::move(lengths));
}

unsigned thread_cap() {
    unsigned n = std::max(1u, std::thread::hardware_concurrency());
    if (const char* env = std::getenv("LVLM_THREADS")) {
        char* end = nullptr;
        const unsigned long v = std::strtoul(env, &end, 10);
        if (*end != '\0' || v == 0) throw InputError("LVLM_THREADS must be a positive integer");
        n = std::min<unsigned>(n, static_cast<unsigned>(v));
    }
    return n;
}

void write_states(const std::string& path, const StateLattice& q, std::size_t num_states) {
    write_file_atomic(path, [&](std::ostream& o) { write_lattice(o, states_as_symbols(q, num_states)); });
}

// Default sidecar for ground-truth states: obs.lat -> obs.states.lat.
std::string sidecar_path(const std::string& out) {
    std::filesystem::path p(out);
    std::filesystem::path side = p.parent_path() / p.stem();
    side += ".states.lat";
    return side.string();
}

struct SynthArgs {
    std::string model, shape, out, states, format = "lat";
    std::size_t sweeps = 50;
    std::uint64_t seed = 0;
};

int cmd_synth(const SynthArgs& a, std::ostream&) {
    const Model model = read_model_file(a.model);
    SynthConfig config{parse_shape(a.shape), adjacency(model), a.sweeps, a.seed};
    const StateLattice truth = gibbs_sample(config);
    Emission emission;
    if (const auto* m = std::get_if<DiscreteModel>(&model)) {
        emission = DiscreteEmission{m->B};
    } else {
        const auto& r = std::get<RealModel>(model);
        emission = GaussianEmission{r.mu, r.sigma};
    }
    const Observation obs = emit_observations(truth, emission, derive_seed(a.seed, 1));
    if (a.format == "pgm") {
        const auto* sym = std::get_if<SymbolLattice>(&obs);
        if (!sym) throw InputError("PGM output needs a discrete model");
        write_file_atomic(a.out, [&](std::ostream& o) { write_pgm(o, *sym); });
    } else {
        write_file_atomic(a.out, [&](std::ostream& o) { write_lattice(o, obs); });
    }
    write_states(a.states.empty() ? sidecar_path(a.out) : a.states, truth, num_states(model));
    return kExitOk;
}

struct LearnArgs {
    std::string variant, out, states_out;
    std::vector<std::string> inputs;
    std::size_t n = 0, w = 1, m = 0;
    std::optional<std::size_t> we, wl;
    double alpha = 1.0;
};

int cmd_learn(const LearnArgs& a, std::ostream&) {
    const Radii radii{a.w, a.we.value_or(a.w), a.wl.value_or(a.w)};
    if (!a.states_out.empty() && a.inputs.size() != 1)
        throw InputError("--states-out needs exactly one --in lattice");
    Model model;
    std::vector<StateLattice> states;
    if (a.variant == "discrete") {
        std::vector<SymbolLattice> images;
        for (const auto& path : a.inputs) {
            auto obs = read_lattice_file(path);
            auto* sym = std::get_if<SymbolLattice>(&obs);
            if (!sym) throw InputError(path + " is not a symbol lattice");
            images.push_back(std::move(*sym));
        }
        auto learned = learn_discrete(images, a.n, radii, a.alpha, a.m);
        model = std::move(learned.model);
        states = std::move(learned.states);
    } else {
        std::vector<VectorLattice> images;
        for (const auto& path : a.inputs) {
            auto obs = read_lattice_file(path);
            auto* vec = std::get_if<VectorLattice>(&obs);
            if (!vec) throw InputError(path + " is not a vector lattice");
            images.push_back(std::move(*vec));
        }
        auto learned = learn_real(images, a.n, radii, a.alpha);
        model = std::move(learned.model);
        states = std::move(learned.states);
    }
    write_file_atomic(a.out, [&](std::ostream& o) { write_model(o, model); });
    if (!a.states_out.empty()) write_states(a.states_out, states.front(), num_states(model));
    return kExitOk;
}

struct DecodeArgs {
    std::string model, in, out, signatures, format = "lat";
};

int cmd_decode(const DecodeArgs& a, std::ostream&) {
    const Model model = read_model_file(a.model);
    const Decoding dec = decode(model, read_lattice_file(a.in));
    if (a.format == "pgm") {
        write_file_atomic(a.out, [&](std::ostream& o) { write_state_pgm(o, dec.states, num_states(model)); });
    } else {
        write_states(a.out, dec.states, num_states(model));
    }
    if (!a.signatures.empty()) {
        VectorLattice x{dec.signatures.shape, dec.signatures.dim, dec.signatures.values};
        write_file_atomic(a.signatures, [&](std::ostream& o) { write_lattice(o, x); });
    }
    return kExitOk;
}

int cmd_evaluate(const std::string& model_path, const std::string& in, std::ostream& out) {
    const double logp = evaluate(read_model_file(model_path), read_lattice_file(in));
    out << "logp=" << format_double(logp) << '\n';
    return kExitOk;
}

int cmd_classify(const std::string& bundle_path, const std::string& in, bool show_posterior, std::ostream& out) {
    const ClassifierBundle bundle = read_bundle_file(bundle_path);
    const Classification result = classify_image(bundle, read_lattice_file(in), thread_cap());
    out << "label=" << bundle.classes[result.best].label << '\n';
    for (std::size_t i = 0; i < bundle.classes.size(); ++i)
        out << "score." << bundle.classes[i].label << '=' << format_double(result.scores[i]) << '\n';
    if (show_posterior) {
        const auto p = softmax(result.scores);
        for (std::size_t i = 0; i < bundle.classes.size(); ++i)
            out << "posterior." << bundle.classes[i].label << '=' << format_double(p[i]) << '\n';
    }
    return kExitOk;
}

int cmd_index(const std::string& model_path, const std::string& states_path, std::optional<std::size_t> w,
              bool interior_only, std::ostream& out, std::ostream& err) {
    const Model model = read_model_file(model_path);
    auto obs = read_lattice_file(states_path);
    const auto* sym = std::get_if<SymbolLattice>(&obs);
    if (!sym) throw InputError(states_path + " is not a state lattice");
    const IndexReport r = index_report(adjacency(model), symbols_as_states(*sym), w.value_or(radii(model).decode),
                                       interior_only ? WindowMode::interior_only : WindowMode::clamped);
    out << "associativity=" << format_double(r.associativity) << '\n'
        << "inertia=" << format_double(r.inertia) << '\n'
        << "w=" << r.w << '\n'
        << "N=" << r.num_states << '\n';
    if (r.associativity < kAssociativityAdvisory)
        err << "warning: associativity " << r.associativity << " is below the advisory " << kAssociativityAdvisory
            << '\n';
    if (r.inertia < kInertiaAdvisory)
        err << "warning: inertia " << r.inertia << " is below the advisory " << kInertiaAdvisory << '\n';
    return kExitOk;
}

struct QuantizeArgs {
    std::string in, out, assignments;
    std::size_t n = 0, w = 0;
};

int cmd_quantize(const QuantizeArgs& a, std::ostream&) {
    const Observation obs = read_lattice_file(a.in);
    const SignatureField x = std::visit([&](const auto& l) { return sweep_signatures(l, a.w); }, obs);
    const Quantization q = pnn_quantize(x.values, x.dim, a.n);
    write_file_atomic(a.out, [&](std::ostream& o) { write_codebook(o, q.codebook); });
    if (!a.assignments.empty())
        write_states(a.assignments, StateLattice{x.shape, q.assignment}, q.codebook.size());
    return kExitOk;
}

}  // namespace

int run_cli(std::span<const std::string> args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Latent-variable lattice model: learning, decoding, evaluation and classification", "lvlm"};
    app.require_subcommand(1);
    const std::vector<std::string> formats{"lat", "pgm"};

    SynthArgs synth;
    auto* s = app.add_subcommand("synth", "Sample a state lattice by Gibbs sampling and emit observations");
    s->add_option("--model", synth.model, "Model supplying potentials (A) and emissions")->required();
    s->add_option("--shape", synth.shape, "Lattice extents, e.g. 64x64")->required();
    s->add_option("--sweeps", synth.sweeps, "Gibbs sweeps")->check(CLI::PositiveNumber);
    s->add_option("--seed", synth.seed, "Random seed");
    s->add_option("--out", synth.out, "Observation lattice output")->required();
    s->add_option("--states", synth.states, "Ground-truth state output (default <out>.states.lat)");
    s->add_option("--format", synth.format, "Observation encoding")->check(CLI::IsMember(formats));

    LearnArgs learn;
    auto* l = app.add_subcommand("learn", "Learn a model from one or more lattices");
    l->add_option("--variant", learn.variant)->required()->check(CLI::IsMember({"discrete", "real"}));
    l->add_option("--n", learn.n, "Number of states")->required()->check(CLI::PositiveNumber);
    l->add_option("--w", learn.w, "Window radius (decoding; default for --we and --wl)");
    l->add_option("--we", learn.we, "Evaluation window radius");
    l->add_option("--wl", learn.wl, "Learning window radius");
    l->add_option("--alpha", learn.alpha, "Markov correction in (0, 1]");
    l->add_option("--m", learn.m, "Symbol alphabet size (discrete; default: from data)");
    l->add_option("--in", learn.inputs, "Training lattice (repeatable)")->required();
    l->add_option("--out", learn.out, "Model output")->required();
    l->add_option("--states-out", learn.states_out, "Write the learned state lattice (single input only)");
    l->add_option("--seed", "Accepted for interface uniformity; learning is deterministic");

    DecodeArgs dec;
    auto* d = app.add_subcommand("decode", "Decode the latent state lattice of an image");
    d->add_option("--model", dec.model)->required();
    d->add_option("--in", dec.in)->required();
    d->add_option("--out", dec.out, "State lattice output")->required();
    d->add_option("--format", dec.format, "lat: state indices; pgm: gray-level visualization")
        ->check(CLI::IsMember(formats));
    d->add_option("--signatures", dec.signatures, "Also write the signature field (f64xM lattice)");

    std::string eval_model, eval_in;
    auto* e = app.add_subcommand("evaluate", "Log-score of an image under a model");
    e->add_option("--model", eval_model)->required();
    e->add_option("--in", eval_in)->required();

    std::string bundle, cls_in;
    bool posterior = false;
    auto* c = app.add_subcommand("classify", "Bayesian classification over per-class models");
    c->add_option("--bundle", bundle, "Manifest of <label> <prior> <model-path> lines")->required();
    c->add_option("--in", cls_in)->required();
    c->add_flag("--softmax", posterior, "Also print normalised posteriors");

    std::string idx_model, idx_states;
    std::optional<std::size_t> idx_w;
    bool interior = false;
    auto* x = app.add_subcommand("index", "Associativity and inertia indices");
    x->add_option("--model", idx_model)->required();
    x->add_option("--states", idx_states)->required();
    x->add_option("--w", idx_w, "Inertia window radius (default: model decoding radius)");
    x->add_flag("--interior-only", interior, "Average only over nodes whose window fits the lattice");

    QuantizeArgs quant;
    auto* q = app.add_subcommand("quantize", "PNN vector quantization of window signatures");
    q->add_option("--in", quant.in)->required();
    q->add_option("--n", quant.n, "Codebook size")->required()->check(CLI::PositiveNumber);
    q->add_option("--w", quant.w, "Signature window radius (0: raw observations)");
    q->add_option("--out", quant.out, "Codebook output")->required();
    q->add_option("--assignments", quant.assignments, "Write per-node cluster indices");

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
        app.parse(reversed);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return kExitOk;
    } catch (const CLI::ParseError& ex) {
        err << "lvlm: " << ex.what() << "\n\n" << app.help();
        return kExitInputError;
    }

    try {
        if (*s) return cmd_synth(synth, out);
        if (*l) return cmd_learn(learn, out);
        if (*d) return cmd_decode(dec, out);
        if (*e) return cmd_evaluate(eval_model, eval_in, out);
        if (*c) return cmd_classify(bundle, cls_in, posterior, out);
        if (*x) return cmd_index(idx_model, idx_states, idx_w, interior, out, err);
        if (*q) return cmd_quantize(quant, out);
    } catch (const NumericError& ex) {
        err << "lvlm: numeric error: " << ex.what() << '\n';
        return kExitNumericError;
    } catch (const std::exception& ex) {
        err << "lvlm: " << ex.what() << '\n';
        return kExitInputError;
    }
    return kExitInputError;
}

}  // namespace lvlm
