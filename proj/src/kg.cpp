#include "snape/kg.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

namespace snape {

namespace {

std::uint64_t pair_key(std::uint32_t a, std::uint32_t b) {
    return (std::uint64_t(a) << 32) | b;
}

bool is_blank(const std::string& line) {
    return std::all_of(line.begin(), line.end(),
                       [](unsigned char c) { return std::isspace(c); });
}

}  // namespace

EntityId Vocabulary::intern_entity(const std::string& label) {
    auto it = entity_ids_.find(label);
    if (it != entity_ids_.end()) return it->second;
    EntityId id = static_cast<EntityId>(entity_labels_.size());
    entity_labels_.push_back(label);
    entity_ids_.emplace(label, id);
    return id;
}

RelationId Vocabulary::intern_relation(const std::string& label) {
    auto it = relation_ids_.find(label);
    if (it != relation_ids_.end()) return it->second;
    RelationId id = static_cast<RelationId>(relation_labels_.size());
    relation_labels_.push_back(label);
    relation_ids_.emplace(label, id);
    return id;
}

std::vector<LabeledTriple> parse_triples(std::istream& in) {
    std::vector<LabeledTriple> out;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (is_blank(line)) continue;
        std::size_t first = line.find('\t');
        std::size_t second = first == std::string::npos ? std::string::npos : line.find('\t', first + 1);
        if (first == std::string::npos || second == std::string::npos ||
            line.find('\t', second + 1) != std::string::npos) {
            throw ParseError(line_no, "expected exactly 3 tab-separated fields");
        }
        out.push_back({line.substr(0, first),
                       line.substr(first + 1, second - first - 1),
                       line.substr(second + 1)});
    }
    return out;
}

std::vector<LabeledTriple> parse_triples_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open triple file: " + path);
    try {
        return parse_triples(in);
    } catch (const ParseError& e) {
        throw std::runtime_error(path + ": " + e.what());
    }
}

void write_triples(std::ostream& out, const std::vector<Triple>& triples, const Vocabulary& vocab) {
    for (const Triple& t : triples) {
        out << vocab.entity_label(t.head) << '\t' << vocab.relation_label(t.relation) << '\t'
            << vocab.entity_label(t.tail) << '\n';
    }
}

Dataset build_dataset(const std::vector<LabeledTriple>& train,
                      const std::vector<LabeledTriple>& valid,
                      const std::vector<LabeledTriple>& test) {
    Dataset ds;
    auto index_split = [&ds](const std::vector<LabeledTriple>& in, std::vector<Triple>& out) {
        out.reserve(in.size());
        for (const LabeledTriple& lt : in) {
            out.push_back({ds.vocab.intern_entity(lt.head),
                           ds.vocab.intern_relation(lt.relation),
                           ds.vocab.intern_entity(lt.tail)});
        }
    };
    index_split(train, ds.train);
    index_split(valid, ds.valid);
    index_split(test, ds.test);

    std::unordered_set<Triple, TripleHash> seen(ds.train.begin(), ds.train.end());
    for (const auto* split : {&ds.valid, &ds.test}) {
        for (const Triple& t : *split) {
            if (!seen.insert(t).second) ds.split_duplicates.push_back(t);
        }
    }
    return ds;
}

Dataset load_dataset(const std::string& train_path,
                     const std::string& valid_path,
                     const std::string& test_path) {
    return build_dataset(parse_triples_file(train_path),
                         parse_triples_file(valid_path),
                         parse_triples_file(test_path));
}

TripleMembership::TripleMembership(const Dataset& dataset) {
    for (const auto* split : {&dataset.train, &dataset.valid, &dataset.test}) {
        for (const Triple& t : *split) {
            if (!all_.insert(t).second) continue;
            tails_[pair_key(t.head, t.relation)].push_back(t.tail);
            heads_[pair_key(t.relation, t.tail)].push_back(t.head);
        }
    }
}

const std::vector<EntityId>& TripleMembership::tails_of(EntityId head, RelationId relation) const {
    auto it = tails_.find(pair_key(head, relation));
    return it == tails_.end() ? empty_ : it->second;
}

const std::vector<EntityId>& TripleMembership::heads_of(RelationId relation, EntityId tail) const {
    auto it = heads_.find(pair_key(relation, tail));
    return it == heads_.end() ? empty_ : it->second;
}

}  // namespace snape
