#pragma once

#include <filesystem>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "lvlm/model.hpp"

namespace lvlm {

struct ClassModel {
    std::string label;
    Model model;
    double log_prior = 0.0;
};

// Class-conditional models with priors. All models share variant, M and d;
// labels are unique and the priors sum to 1.
struct ClassifierBundle {
    std::vector<ClassModel> classes;

    void validate(bool normalized_priors = true) const;
};

struct Classification {
    std::size_t best = 0;
    // log prior + evaluation log-score per class, in declaration order.
    // Unnormalised: evaluation scores are not calibrated likelihoods.
    std::vector<double> scores;
};

// Bayes decision over the bundle; ties go to the first declared class.
// Per-class evaluations run on up to `threads` threads.
Classification classify_image(const ClassifierBundle& bundle, const Observation& obs, unsigned threads = 1);

// Normalised posteriors from unnormalised log scores, for display.
std::vector<double> softmax(std::span<const double> scores);

// Bundle manifest: one class per line, `<label> <prior> <model-path>`, with
// '#' comments. Relative model paths resolve against the manifest's
// directory. Priors must be positive and sum to 1.
ClassifierBundle read_bundle(std::istream& in, const std::filesystem::path& base_dir);
ClassifierBundle read_bundle_file(const std::filesystem::path& path);

}  // namespace lvlm
