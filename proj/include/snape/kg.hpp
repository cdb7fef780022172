#pragma once

#include <cstdint>
#include <istream>
#include <ostream>
#include <string>
#include <unordered_map>
#include <unordered_set>
#include <vector>

namespace snape {

using EntityId = std::uint32_t;
using RelationId = std::uint32_t;

struct Triple {
    EntityId head;
    RelationId relation;
    EntityId tail;

    bool operator==(const Triple&) const = default;
};

struct TripleHash {
    std::size_t operator()(const Triple& t) const noexcept {
        std::uint64_t k = (std::uint64_t(t.head) << 32) ^ (std::uint64_t(t.relation) << 16) ^ t.tail;
        k ^= k >> 33;
        k *= 0xff51afd7ed558ccdULL;
        k ^= k >> 33;
        return static_cast<std::size_t>(k);
    }
};

struct LabeledTriple {
    std::string head;
    std::string relation;
    std::string tail;
};

/// Stable label <-> id mapping. Ids are assigned by first appearance.
class Vocabulary {
public:
    EntityId intern_entity(const std::string& label);
    RelationId intern_relation(const std::string& label);

    std::size_t num_entities() const { return entity_labels_.size(); }
    std::size_t num_relations() const { return relation_labels_.size(); }

    const std::string& entity_label(EntityId id) const { return entity_labels_.at(id); }
    const std::string& relation_label(RelationId id) const { return relation_labels_.at(id); }

private:
    std::vector<std::string> entity_labels_;
    std::vector<std::string> relation_labels_;
    std::unordered_map<std::string, EntityId> entity_ids_;
    std::unordered_map<std::string, RelationId> relation_ids_;
};

struct Dataset {
    std::vector<Triple> train;
    std::vector<Triple> valid;
    std::vector<Triple> test;
    Vocabulary vocab;
    /// Triples appearing in more than one split (warning-level, not fatal).
    std::vector<Triple> split_duplicates;
};

/// Immutable membership index over train + valid + test.
class TripleMembership {
public:
    explicit TripleMembership(const Dataset& dataset);

    bool contains(const Triple& t) const { return all_.count(t) > 0; }
    /// All known tails t such that (h, r, t) is in any split.
    const std::vector<EntityId>& tails_of(EntityId head, RelationId relation) const;
    /// All known heads h such that (h, r, t) is in any split.
    const std::vector<EntityId>& heads_of(RelationId relation, EntityId tail) const;

private:
    std::unordered_set<Triple, TripleHash> all_;
    std::unordered_map<std::uint64_t, std::vector<EntityId>> tails_;
    std::unordered_map<std::uint64_t, std::vector<EntityId>> heads_;
    std::vector<EntityId> empty_;
};

struct ParseError : std::runtime_error {
    ParseError(std::size_t line, const std::string& what)
        : std::runtime_error("line " + std::to_string(line) + ": " + what), line_number(line) {}
    std::size_t line_number;
};

/// Reads tab-separated (head, relation, tail) lines. Whitespace-only lines are
/// skipped; any other line must have exactly three fields.
std::vector<LabeledTriple> parse_triples(std::istream& in);
std::vector<LabeledTriple> parse_triples_file(const std::string& path);

void write_triples(std::ostream& out, const std::vector<Triple>& triples, const Vocabulary& vocab);

/// Builds the vocabulary over all three splits; ids follow first appearance in
/// train, then valid, then test. Duplicate triples across splits are recorded,
/// not rejected.
Dataset build_dataset(const std::vector<LabeledTriple>& train,
                      const std::vector<LabeledTriple>& valid,
                      const std::vector<LabeledTriple>& test);

Dataset load_dataset(const std::string& train_path,
                     const std::string& valid_path,
                     const std::string& test_path);

}  // namespace snape
