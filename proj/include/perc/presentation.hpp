#pragma once

#include <string>
#include <utility>
#include <vector>

#include "perc/graph_core.hpp"

namespace perc {

// Generator i is written with letter kGeneratorLetters[i]; the upper-case
// letter denotes its inverse.
inline constexpr std::string_view kGeneratorLetters = "xyzwabcdefghijklmnopqrstuv";

struct Presentation {
    int generator_count = 0;
    std::vector<std::string> relators;

    std::size_t max_relator_length() const;
    // Throws InvalidArgument on unknown letters or freely unreduced words.
    void validate() const;

    static Presentation free_abelian(int d);
};

Presentation parse_presentation_json(const std::string& text);
std::string presentation_to_json(const Presentation& pres);

// Confluent shortlex rewriting system for a presentation, obtained by
// Knuth-Bendix completion. Letters are encoded 2*i (generator) and 2*i+1
// (inverse), so the shortlex order is x < X < y < Y < ...
class RewritingSystem {
public:
    explicit RewritingSystem(const Presentation& pres, std::size_t max_rules = 2000);

    std::string normal_form(const std::string& word) const;
    std::size_t rule_count() const { return rules_.size(); }

private:
    std::vector<std::pair<std::string, std::string>> rules_;

    std::string reduce(std::string word) const;
};

// Ball of the given word-metric radius in the Cayley graph, labelled by
// shortlex normal forms, with the relator cycles attached as basis.
// Coordinates are the exponent sums per generator.
PatchPtr build_cayley_patch(const Presentation& pres, int radius);

}  // namespace perc
