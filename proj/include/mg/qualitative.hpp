#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace mg {

enum class Algebra { Rcc8, Allen };

std::string_view algebra_name(Algebra a);
std::optional<Algebra> parse_algebra(std::string_view name);
int base_count(Algebra a);

enum class Rcc8 : std::uint8_t { DC, EC, PO, EQ, TPP, NTPP, TPPi, NTPPi };

enum class Allen : std::uint8_t {
    Before,
    Meets,
    Overlaps,
    Starts,
    During,
    Finishes,
    Equal,
    FinishedBy,
    Contains,
    StartedBy,
    OverlappedBy,
    MetBy,
    After,
};

std::string_view base_name(Algebra a, int r);
// Accepts the canonical names plus, for Allen, the one/two letter
// abbreviations (b m o s d f eq fi di si oi mi bi).
std::optional<int> parse_base(Algebra a, std::string_view name);
// Algebra whose base relation names include `name`.
std::optional<Algebra> algebra_of_base(std::string_view name);

int converse(Algebra a, int r);
inline Rcc8 converse(Rcc8 r) { return static_cast<Rcc8>(converse(Algebra::Rcc8, static_cast<int>(r))); }
inline Allen converse(Allen r) { return static_cast<Allen>(converse(Algebra::Allen, static_cast<int>(r))); }
inline std::string_view name(Rcc8 r) { return base_name(Algebra::Rcc8, static_cast<int>(r)); }
inline std::string_view name(Allen r) { return base_name(Algebra::Allen, static_cast<int>(r)); }

class RelationSet {
public:
    explicit RelationSet(Algebra a, std::uint16_t bits = 0);
    RelationSet(Rcc8 r);   // NOLINT: singleton
    RelationSet(Allen r);  // NOLINT: singleton

    static RelationSet full(Algebra a);
    static RelationSet single(Algebra a, int r);
    // "{DC,EC}", "DC" or "*" (full)
    static RelationSet parse(Algebra a, std::string_view text);

    Algebra algebra() const { return algebra_; }
    std::uint16_t bits() const { return bits_; }
    bool contains(int r) const { return (bits_ >> r) & 1U; }
    int size() const;
    bool empty() const { return bits_ == 0; }
    bool is_full() const { return *this == full(algebra_); }
    std::optional<int> singleton() const;
    std::vector<int> members() const;

    RelationSet complement() const;
    RelationSet converse() const;
    RelationSet operator&(const RelationSet& o) const;
    RelationSet operator|(const RelationSet& o) const;
    friend bool operator==(const RelationSet&, const RelationSet&) = default;

    std::string to_string() const;

private:
    void check_same(const RelationSet& o) const;

    Algebra algebra_;
    std::uint16_t bits_;
};

RelationSet compose(Algebra a, int r1, int r2);
inline RelationSet compose(Rcc8 a, Rcc8 b) { return compose(Algebra::Rcc8, static_cast<int>(a), static_cast<int>(b)); }
inline RelationSet compose(Allen a, Allen b) {
    return compose(Algebra::Allen, static_cast<int>(a), static_cast<int>(b));
}
RelationSet compose_sets(const RelationSet& s1, const RelationSet& s2);

// ---- interval and region oracles ----

struct IntInterval {
    int start = 0;
    int end = 1;
    friend bool operator==(const IntInterval&, const IntInterval&) = default;
};

Allen allen_classify(IntInterval x, IntInterval y);

// Union of closed unit cells inside a width x height box (at most 64
// cells). The box is the whole universe: cells outside it do not exist.
class GridRegion {
public:
    GridRegion(int width, int height, const std::vector<std::pair<int, int>>& cells);
    static GridRegion from_mask(int width, int height, std::uint64_t mask);

    int width() const { return width_; }
    int height() const { return height_; }
    std::uint64_t mask() const { return mask_; }
    bool contains(int x, int y) const;
    // The region plus every cell sharing at least a corner with it.
    std::uint64_t dilated() const;
    std::uint64_t universe() const;

private:
    GridRegion(int width, int height);
    int width_;
    int height_;
    std::uint64_t mask_ = 0;
};

// C(X,Y): the closed cell unions share a point.
bool grid_connected(const GridRegion& x, const GridRegion& y);
Rcc8 rcc8_classify(const GridRegion& x, const GridRegion& y);

// RCC-8 between closed axis-aligned boxes in the unbounded plane.
Rcc8 rcc8_classify_boxes(IntInterval xh, IntInterval xv, IntInterval yh, IntInterval yv);

// ---- gap / abut / overlap coarsening ----

enum class GaoLetter { G, A, O };
enum class GaoSign { Plus, Minus, Even };

struct GaoRelation {
    GaoLetter letter;
    GaoSign sign;

    std::string to_string() const;  // G+, A-, O+, O/E ...
    friend bool operator==(const GaoRelation&, const GaoRelation&) = default;
};

GaoRelation coarsen_to_gao(Allen r);
// Allen relations coarsening to a letter, optionally restricted to one sign.
RelationSet gao_relations(GaoLetter letter, std::optional<GaoSign> sign = std::nullopt);
std::optional<GaoLetter> parse_gao_letter(char c);
// "G+", "A-", "O" (all nine overlap relations), "O+", "O-", "O/E".
std::optional<RelationSet> parse_gao(std::string_view text);

// ---- constraint networks ----

class ConstraintNetwork {
public:
    explicit ConstraintNetwork(Algebra a) : algebra_(a) {}

    Algebra algebra() const { return algebra_; }
    std::size_t size() const { return names_.size(); }
    const std::vector<std::string>& variables() const { return names_; }
    std::optional<std::size_t> index_of(std::string_view name) const;

    std::size_t add_variable(const std::string& name);
    // Intersects the stored relation; the converse direction follows.
    void constrain(std::size_t i, std::size_t j, const RelationSet& r);
    void constrain(const std::string& a, const std::string& b, const RelationSet& r);
    void set(std::size_t i, std::size_t j, const RelationSet& r);
    RelationSet relation(std::size_t i, std::size_t j) const;
    RelationSet relation(const std::string& a, const std::string& b) const;
    bool has_empty() const;

    // Lines "a b {R,...}" for every pair i<j without full information.
    std::string to_text() const;
    // When `algebra` is absent it is inferred from the relation names.
    static ConstraintNetwork from_text(std::string_view text, std::optional<Algebra> algebra = std::nullopt);

    // Same variables and same relation between every pair of names.
    friend bool operator==(const ConstraintNetwork& a, const ConstraintNetwork& b);

private:
    Algebra algebra_;
    std::vector<std::string> names_;
    std::vector<std::vector<std::uint16_t>> rel_;
};

// R_ij <- R_ij & (R_ik o R_kj), keeping R_ji the converse. Returns whether
// R_ij changed.
bool revise(ConstraintNetwork& net, std::size_t i, std::size_t k, std::size_t j);
// Fixpoint of revise over all triples; nullopt when some relation empties.
std::optional<ConstraintNetwork> path_consistency(ConstraintNetwork net);

}  // namespace mg
