#pragma once

#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace mg {

struct Connector {
    std::string label;
    char dir = '+';  // '+' links rightward, '-' leftward

    std::string to_string() const { return label + dir; }
    friend bool operator==(const Connector&, const Connector&) = default;
};

Connector parse_connector(std::string_view text);

// Labels match when their leading uppercase heads are equal and their
// subscripts agree over the common length (Ss matches S, Ss does not match
// Sp). Labels not starting with an uppercase letter must be identical.
bool labels_match(std::string_view a, std::string_view b);
// The label recorded on a link: the more specific of the two.
std::string link_label(std::string_view a, std::string_view b);

struct ConnectorExpr {
    enum class Op { Leaf, And, Or, Empty };
    Op op = Op::Empty;
    Connector leaf;
    std::vector<ConnectorExpr> children;
};

ConnectorExpr parse_expr(std::string_view text);

struct Disjunct {
    std::vector<Connector> left;   // index 0 links to the nearest word
    std::vector<Connector> right;  // index 0 links to the nearest word
    std::string to_string() const;
    friend bool operator==(const Disjunct&, const Disjunct&) = default;
};

std::vector<Disjunct> expand(const ConnectorExpr& expr);

struct WordEntry {
    std::string word;       // surface spelling, e.g. "Jack" or "LEFT-WALL"
    std::string subscript;  // e.g. ".b", ".v-d", or empty
    ConnectorExpr expr;
    std::vector<Disjunct> disjuncts;

    std::string display() const { return word + subscript; }
};

// Link-grammar lexicon plus the lexical annotations used downstream.
// Lines of the form `#name args...;` are annotations:
//   #lemma WORD LEMMA;      #pred LEMMA FORM;     #gender WORD G;
//   #proper W...;  #plural W...;  #copula W...;  #relprep W...;  #function W...;
// Unrecognized annotations are kept verbatim for other modules.
class Dictionary {
public:
    static Dictionary load(std::string_view text);

    static std::string key(std::string_view word);  // lowercase

    const WordEntry* find(std::string_view word) const;
    // Token lookup: lowercased; digit strings fall back to NUMBER.
    const WordEntry* lookup(std::string_view token) const;
    const std::map<std::string, WordEntry>& entries() const { return entries_; }
    bool has_wall() const { return find("LEFT-WALL") != nullptr; }
    const std::vector<std::string>& warnings() const { return warnings_; }

    // Whitespace split, "." and "," split off, multiword entries written
    // with underscores merged greedily (longest first, case-insensitive).
    std::vector<std::string> tokenize(std::string_view sentence) const;

    std::string lemma(std::string_view token) const;
    // Name used for instances of a lemma (e.g. overlap -> overlaps).
    std::string pred_form(std::string_view lemma) const;
    std::optional<std::string> gender(std::string_view token) const;
    bool is_proper(std::string_view token) const { return in(proper_, token); }
    bool is_plural(std::string_view token) const { return in(plural_, token); }
    bool is_copula(std::string_view token) const { return in(copula_, token); }
    bool is_relprep(std::string_view token) const { return in(relprep_, token); }
    bool is_function(std::string_view token) const { return in(function_, token); }
    const std::vector<std::string>& function_words() const { return function_list_; }

    // Raw annotations by name, each as its argument list.
    const std::vector<std::vector<std::string>>& annotations(const std::string& name) const;

private:
    static bool in(const std::map<std::string, bool>& m, std::string_view token);

    std::map<std::string, WordEntry> entries_;
    std::map<std::string, std::string> lemma_;
    std::map<std::string, std::string> pred_;
    std::map<std::string, std::string> gender_;
    std::map<std::string, bool> proper_, plural_, copula_, relprep_, function_;
    std::vector<std::string> function_list_;
    std::map<std::string, std::vector<std::vector<std::string>>> annotations_;
    std::vector<std::string> warnings_;
    std::size_t longest_idiom_ = 1;
};

inline Dictionary load_dictionary(std::string_view text) { return Dictionary::load(text); }

struct Link {
    std::size_t left = 0;
    std::size_t right = 0;
    std::string label;

    friend auto operator<=>(const Link&, const Link&) = default;
};

struct Linkage {
    std::vector<std::string> tokens;  // surface tokens; "LEFT-WALL" first when walls are on
    std::vector<std::string> words;   // dictionary display forms, e.g. "Jack.b"
    std::vector<Disjunct> disjuncts;  // chosen per token
    std::vector<Link> links;          // sorted

    std::size_t total_length() const;
};

struct ParseOptions {
    bool walls = true;  // prepend LEFT-WALL when the dictionary has one
};

struct ParseResult {
    std::vector<Linkage> linkages;  // best first
};

// All linkages satisfying planarity, connectivity, ordering and exclusion.
// Throws DomainError for a token missing from the dictionary.
ParseResult parse(const std::vector<std::string>& tokens, const Dictionary& dict, ParseOptions options = {});

struct MetaruleReport {
    bool planar = true;
    bool connected = true;
    bool exclusion = true;
    bool ordering = true;
    bool all() const { return planar && connected && exclusion && ordering; }
};

bool links_planar(std::span<const std::pair<std::size_t, std::size_t>> links);
MetaruleReport check_metarules(const Linkage& linkage);

// Ranking used by parse(): fewer links, shorter total length, then labels.
bool linkage_less(const Linkage& a, const Linkage& b);

std::string render_arcs(const Linkage& linkage);
std::string render_links(const Linkage& linkage);  // "(i j LABEL)" per line

}  // namespace mg
