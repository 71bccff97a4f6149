#include "lvlm/classify.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <fstream>
#include <istream>
#include <limits>
#include <mutex>
#include <sstream>
#include <thread>

#include "lvlm/error.hpp"
#include "lvlm/model_io.hpp"

namespace lvlm {

void ClassifierBundle::validate(bool normalized_priors) const {
    if (classes.empty()) throw InputError("classifier bundle has no classes");
    double total = 0.0;
    for (std::size_t i = 0; i < classes.size(); ++i) {
        const ClassModel& c = classes[i];
        if (!std::isfinite(c.log_prior)) throw InputError("class '" + c.label + "' has a non-finite log prior");
        total += std::exp(c.log_prior);
        for (std::size_t j = 0; j < i; ++j)
            if (classes[j].label == c.label) throw InputError("duplicate class label '" + c.label + "'");
    }
    if (normalized_priors && std::abs(total - 1.0) > 1e-9) throw InputError("class priors do not sum to 1");
    const Model& first = classes.front().model;
    for (const ClassModel& c : classes) {
        if (c.model.index() != first.index())
            throw InputError("class '" + c.label + "' uses a different model variant");
        if (model_dims(c.model) != model_dims(first))
            throw InputError("class '" + c.label + "' has a different lattice dimension");
        if (observation_size(c.model) != observation_size(first)) throw InputError("class '" + c.label + "' has a different observation size M");
    }
}

Classification classify_image(const ClassifierBundle& bundle, const Observation& obs, unsigned threads) {
    // The decision only depends on prior differences, so unnormalised priors
    // are accepted here.
    bundle.validate(false);
    const std::size_t n = bundle.classes.size();
    Classification out;
    out.scores.assign(n, 0.0);

    std::atomic<std::size_t> next{0};
    std::exception_ptr failure;
    std::mutex failure_mutex;
    auto worker = [&] {
        for (std::size_t i; (i = next++) < n;) {
            try {
                out.scores[i] = bundle.classes[i].log_prior + evaluate(bundle.classes[i].model, obs);
            } catch (...) {
                std::lock_guard lock(failure_mutex);
                if (!failure) failure = std::current_exception();
            }
        }
    };
    const unsigned count = std::clamp<unsigned>(threads, 1, static_cast<unsigned>(n));
    if (count == 1) {
        worker();
    } else {
        std::vector<std::jthread> pool;
        for (unsigned i = 0; i < count; ++i) pool.emplace_back(worker);
    }
    if (failure) std::rethrow_exception(failure);

    for (std::size_t i = 1; i < n; ++i)
        if (out.scores[i] > out.scores[out.best]) out.best = i;
    return out;
}

std::vector<double> softmax(std::span<const double> scores) {
    std::vector<double> p(scores.size(), 0.0);
    if (scores.empty()) return p;
    const double top = *std::max_element(scores.begin(), scores.end());
    if (top == -std::numeric_limits<double>::infinity()) {
        std::fill(p.begin(), p.end(), 1.0 / static_cast<double>(p.size()));
        return p;
    }
    double total = 0.0;
    for (std::size_t i = 0; i < scores.size(); ++i) total += (p[i] = std::exp(scores[i] - top));
    for (double& v : p) v /= total;
    return p;
}

ClassifierBundle read_bundle(std::istream& in, const std::filesystem::path& base_dir) {
    ClassifierBundle bundle;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        std::istringstream s(line);
        std::string label;
        if (!(s >> label) || label[0] == '#') continue;
        std::string prior_tok, path;
        if (!(s >> prior_tok >> path))
            throw InputError("bundle line " + std::to_string(lineno) + ": expected <label> <prior> <model-path>");
        char* end = nullptr;
        const double prior = std::strtod(prior_tok.c_str(), &end);
        if (*end != '\0' || !(prior > 0.0))
            throw InputError("bundle line " + std::to_string(lineno) + ": prior must be a positive number");
        std::filesystem::path model_path(path);
        if (model_path.is_relative()) model_path = base_dir / model_path;
        bundle.classes.push_back({label, read_model_file(model_path), std::log(prior)});
    }
    bundle.validate();
    return bundle;
}

ClassifierBundle read_bundle_file(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw InputError("cannot open " + path.string());
    return read_bundle(in, path.parent_path());
}

}  // namespace lvlm
