#include "perc/presentation.hpp"

#include <algorithm>
#include <deque>
#include <map>
#include <set>

#include "json.hpp"

namespace perc {

namespace {

bool shortlex_less(const std::string& a, const std::string& b) {
    if (a.size() != b.size()) return a.size() < b.size();
    return std::lexicographical_compare(a.begin(), a.end(), b.begin(), b.end(),
                                        [](char l, char r) { return static_cast<unsigned char>(l) < static_cast<unsigned char>(r); });
}

int letter_code(char c, int generator_count) {
    for (int i = 0; i < generator_count; ++i) {
        char lower = kGeneratorLetters[static_cast<std::size_t>(i)];
        if (c == lower) return 2 * i;
        if (c == lower - 'a' + 'A') return 2 * i + 1;
    }
    return -1;
}

std::string encode(const std::string& word, int generator_count) {
    std::string out;
    for (char c : word) {
        int code = letter_code(c, generator_count);
        if (code < 0) throw InvalidArgument(std::string("invalid letter '") + c + "' in word " + word);
        out.push_back(static_cast<char>(code));
    }
    return out;
}

std::string decode(const std::string& word) {
    std::string out;
    for (char c : word) {
        int code = static_cast<unsigned char>(c);
        char lower = kGeneratorLetters[static_cast<std::size_t>(code / 2)];
        out.push_back(code % 2 ? static_cast<char>(lower - 'a' + 'A') : lower);
    }
    return out;
}

}  // namespace

std::size_t Presentation::max_relator_length() const {
    std::size_t t = 0;
    for (const auto& r : relators) t = std::max(t, r.size());
    return t;
}

void Presentation::validate() const {
    if (generator_count < 1 || generator_count > static_cast<int>(kGeneratorLetters.size()))
        throw InvalidArgument("generator count out of range");
    for (const auto& r : relators) {
        if (r.empty()) throw InvalidArgument("empty relator");
        std::string code = encode(r, generator_count);
        for (std::size_t i = 0; i + 1 < code.size(); ++i)
            if ((code[i] ^ 1) == code[i + 1]) throw InvalidArgument("relator " + r + " is not freely reduced");
    }
}

Presentation Presentation::free_abelian(int d) {
    Presentation pres;
    pres.generator_count = d;
    for (int i = 0; i < d; ++i)
        for (int j = i + 1; j < d; ++j) {
            char a = kGeneratorLetters[static_cast<std::size_t>(i)];
            char b = kGeneratorLetters[static_cast<std::size_t>(j)];
            pres.relators.push_back(std::string{a, b, static_cast<char>(a - 'a' + 'A'), static_cast<char>(b - 'a' + 'A')});
        }
    return pres;
}

Presentation parse_presentation_json(const std::string& text) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::exception& e) {
        throw InvalidArgument(std::string("malformed presentation JSON: ") + e.what());
    }
    if (!j.is_object() || !j.contains("generators") || !j["generators"].is_number_integer())
        throw InvalidArgument("presentation needs an integer 'generators' field");
    Presentation pres;
    pres.generator_count = j["generators"].get<int>();
    if (j.contains("relators")) {
        if (!j["relators"].is_array()) throw InvalidArgument("'relators' must be an array of strings");
        for (const auto& r : j["relators"]) {
            if (!r.is_string()) throw InvalidArgument("'relators' must be an array of strings");
            pres.relators.push_back(r.get<std::string>());
        }
    }
    pres.validate();
    return pres;
}

std::string presentation_to_json(const Presentation& pres) {
    nlohmann::json j{{"generators", pres.generator_count}, {"relators", pres.relators}};
    return j.dump();
}

RewritingSystem::RewritingSystem(const Presentation& pres, std::size_t max_rules) {
    pres.validate();
    auto orient = [](std::string a, std::string b) {
        if (shortlex_less(a, b)) std::swap(a, b);
        return std::make_pair(std::move(a), std::move(b));
    };
    for (int i = 0; i < pres.generator_count; ++i) {
        rules_.push_back({std::string{char(2 * i), char(2 * i + 1)}, ""});
        rules_.push_back({std::string{char(2 * i + 1), char(2 * i)}, ""});
    }
    std::deque<std::pair<std::string, std::string>> pending;
    for (const auto& r : pres.relators) pending.push_back({encode(r, pres.generator_count), ""});

    auto add_equation = [&](const std::string& a, const std::string& b) {
        std::string x = reduce(a), y = reduce(b);
        if (x == y) return false;
        rules_.push_back(orient(x, y));
        if (rules_.size() > max_rules) throw CapExceeded("Knuth-Bendix completion exceeded the rule cap");
        // Interreduce: rules whose left side became reducible are re-queued.
        for (std::size_t i = 0; i + 1 < rules_.size();) {
            const std::string& lhs = rules_[i].first;
            if (lhs.find(rules_.back().first) != std::string::npos) {
                pending.push_back(rules_[i]);
                rules_.erase(rules_.begin() + static_cast<long>(i));
            } else {
                ++i;
            }
        }
        for (auto& rule : rules_) {
            auto saved = std::move(rule.second);
            rule.second = reduce(saved);
        }
        return true;
    };

    for (;;) {
        while (!pending.empty()) {
            auto [a, b] = pending.front();
            pending.pop_front();
            add_equation(a, b);
        }
        bool added = false;
        for (std::size_t i = 0; i < rules_.size() && !added; ++i) {
            for (std::size_t j = 0; j < rules_.size() && !added; ++j) {
                const auto [li, ri] = rules_[i];
                const auto [lj, rj] = rules_[j];
                for (std::size_t k = 1; k < std::min(li.size(), lj.size()) && !added; ++k) {
                    if (li.compare(li.size() - k, k, lj, 0, k) != 0) continue;
                    std::string left = ri + lj.substr(k);
                    std::string right = li.substr(0, li.size() - k) + rj;
                    added = add_equation(left, right);
                }
                if (!added && i != j && lj.size() <= li.size()) {
                    auto pos = li.find(lj);
                    if (pos != std::string::npos) {
                        std::string right = li.substr(0, pos) + rj + li.substr(pos + lj.size());
                        added = add_equation(ri, right);
                    }
                }
            }
        }
        if (!added && pending.empty()) break;
    }
}

std::string RewritingSystem::reduce(std::string word) const {
    bool changed = true;
    while (changed) {
        changed = false;
        for (const auto& [lhs, rhs] : rules_) {
            auto pos = word.find(lhs);
            if (pos != std::string::npos) {
                word.replace(pos, lhs.size(), rhs);
                changed = true;
            }
        }
    }
    return word;
}

std::string RewritingSystem::normal_form(const std::string& word) const { return reduce(word); }

PatchPtr build_cayley_patch(const Presentation& pres, int radius) {
    if (radius < 1) throw InvalidArgument("radius must be at least 1");
    pres.validate();
    RewritingSystem rws(pres);
    const int k = pres.generator_count;

    std::map<std::string, std::size_t> index;
    std::vector<std::string> words{""};
    std::vector<int> dist{0};
    index[""] = 0;
    for (std::size_t head = 0; head < words.size(); ++head) {
        if (dist[head] == radius) continue;
        for (int c = 0; c < 2 * k; ++c) {
            std::string w = rws.normal_form(words[head] + char(c));
            if (index.count(w)) continue;
            index[w] = words.size();
            words.push_back(w);
            dist.push_back(dist[head] + 1);
        }
    }
    const std::size_t budget = enumeration_cap(5'000'000);
    if (words.size() > budget) throw CapExceeded("Cayley ball exceeds the vertex budget");

    std::vector<std::vector<int>> sums(words.size(), std::vector<int>(static_cast<std::size_t>(k), 0));
    for (std::size_t v = 0; v < words.size(); ++v)
        for (char c : words[v]) sums[v][static_cast<std::size_t>(c / 2)] += (c % 2) ? -1 : 1;
    std::set<std::vector<int>> distinct(sums.begin(), sums.end());
    bool abelian_labels = distinct.size() == sums.size();

    PatchBuilder b(PatchKind::cayley);
    for (std::size_t v = 0; v < words.size(); ++v) {
        auto coords = sums[v];
        if (!abelian_labels) coords.push_back(static_cast<int>(v));
        std::string label = words[v].empty() ? "e" : decode(words[v]);
        b.add_vertex(std::move(coords), std::move(label));
        if (dist[v] == radius) b.set_escape(static_cast<VertexId>(v));
    }
    b.set_origin(0);
    for (std::size_t v = 0; v < words.size(); ++v)
        for (int g = 0; g < k; ++g) {
            auto it = index.find(rws.normal_form(words[v] + char(2 * g)));
            if (it != index.end() && it->second != v)
                b.add_edge(static_cast<VertexId>(v), static_cast<VertexId>(it->second));
        }

    std::vector<std::string> relators;
    for (const auto& r : pres.relators) {
        std::string code = encode(r, k);
        std::set<std::string> seen;
        std::string prefix;
        for (char c : code) {
            if (!seen.insert(rws.normal_form(prefix)).second)
                throw InvalidArgument("relator " + r + " does not induce a cycle");
            prefix.push_back(c);
        }
        if (code.size() < 3) throw InvalidArgument("relator " + r + " does not induce a cycle");
        relators.push_back(code);
    }

    std::set<std::vector<std::pair<VertexId, VertexId>>> seen_cycles;
    std::vector<std::vector<VertexId>> cycles;
    for (std::size_t v = 0; v < words.size(); ++v) {
        for (const auto& code : relators) {
            std::vector<VertexId> cyc;
            std::string w = words[v];
            bool inside = true;
            for (char c : code) {
                auto it = index.find(w);
                if (it == index.end()) {
                    inside = false;
                    break;
                }
                cyc.push_back(static_cast<VertexId>(it->second));
                w = rws.normal_form(w + c);
            }
            if (!inside) continue;
            std::vector<std::pair<VertexId, VertexId>> key;
            for (std::size_t i = 0; i < cyc.size(); ++i) {
                VertexId a = cyc[i], c = cyc[(i + 1) % cyc.size()];
                key.emplace_back(std::min(a, c), std::max(a, c));
            }
            std::sort(key.begin(), key.end());
            if (seen_cycles.insert(key).second) cycles.push_back(std::move(cyc));
        }
    }
    b.set_basis(cycles);
    auto patch = b.finish();
    std::size_t expected = patch->edge_count() - patch->vertex_count() + 1;
    if (cycle_space_rank(*patch) != expected)
        throw StructuralError("relator cycles do not span the cycle space of the patch");
    return patch;
}

}  // namespace perc
