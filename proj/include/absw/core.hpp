#ifndef ABSW_CORE_HPP
#define ABSW_CORE_HPP

#include <bit>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace absw {

/// Finite first-order domain of n objects, labeled 0..n-1 by default.
/// Enumeration sweeps over the concept space cost up to O(4^n) pairs and
/// O(n! * 2^n) map checks, so constructors enforce a hard cap.
class Domain {
public:
    static constexpr int kDefaultCap = 6;

    explicit Domain(int n, std::vector<std::string> names = {}, int cap = kDefaultCap)
        : n_(n), names_(std::move(names)) {
        if (n < 0)
            throw std::invalid_argument("domain size must be non-negative");
        if (n > cap)
            throw std::invalid_argument("domain size " + std::to_string(n) +
                                        " exceeds cap " + std::to_string(cap));
        if (names_.empty()) {
            names_.reserve(static_cast<size_t>(n));
            for (int i = 0; i < n; ++i)
                names_.push_back(std::to_string(i));
        } else {
            if (static_cast<int>(names_.size()) != n)
                throw std::invalid_argument("names list must have exactly n entries");
            for (size_t i = 0; i < names_.size(); ++i)
                for (size_t j = i + 1; j < names_.size(); ++j)
                    if (names_[i] == names_[j])
                        throw std::invalid_argument("object names must be pairwise distinct");
        }
    }

    int size() const { return n_; }
    const std::string& name(int i) const { return names_.at(static_cast<size_t>(i)); }
    const std::vector<std::string>& names() const { return names_; }

    /// Bitmask of all n objects.
    std::uint32_t universeMask() const { return (n_ == 32) ? ~0u : ((1u << n_) - 1u); }

    bool operator==(const Domain& o) const { return n_ == o.n_ && names_ == o.names_; }

private:
    int n_;
    std::vector<std::string> names_;
};

/// A subset of the object domain, stored as a bitmask (bit i <=> object i).
class Concept {
public:
    Concept() : bits_(0), n_(0) {}
    Concept(std::uint32_t bits, int n) : bits_(bits), n_(n) {
        if (n < 0 || n > 31)
            throw std::invalid_argument("concept width out of range");
        if (bits & ~widthMask(n))
            throw std::invalid_argument("concept has bits outside the domain");
    }

    static Concept empty(int n) { return Concept(0, n); }
    static Concept universe(int n) { return Concept(widthMask(n), n); }

    int width() const { return n_; }
    std::uint32_t mask() const { return bits_; }
    bool contains(int i) const { return (bits_ >> i) & 1u; }
    int cardinality() const { return std::popcount(bits_); }
    bool isEmpty() const { return bits_ == 0; }

    Concept unionWith(const Concept& o) const { return Concept(bits_ | o.bits_, n_); }
    Concept intersectWith(const Concept& o) const { return Concept(bits_ & o.bits_, n_); }
    Concept minus(const Concept& o) const { return Concept(bits_ & ~o.bits_, n_); }
    Concept complement() const { return Concept(~bits_ & widthMask(n_), n_); }
    bool subsetOf(const Concept& o) const { return (bits_ & ~o.bits_) == 0; }

    bool operator==(const Concept& o) const { return bits_ == o.bits_ && n_ == o.n_; }
    bool operator!=(const Concept& o) const { return !(*this == o); }
    /// Bit-vector order; the tie-breaking order used for all reported witnesses.
    bool operator<(const Concept& o) const { return bits_ < o.bits_; }

    std::string toString(const Domain& d) const {
        std::string s = "{";
        bool first = true;
        for (int i = 0; i < n_; ++i) {
            if (!contains(i)) continue;
            if (!first) s += ",";
            s += d.name(i);
            first = false;
        }
        return s + "}";
    }

private:
    static std::uint32_t widthMask(int n) { return (n >= 32) ? ~0u : ((1u << n) - 1u); }

    std::uint32_t bits_;
    int n_;
};

enum class MapKind { Arbitrary, Injective, Bijective };

/// A self-map of the object domain. On a finite domain every injection is a
/// bijection; the constructor asserts this when the kind says injective.
class ObjectMap {
public:
    ObjectMap(std::vector<int> table, MapKind kind) : table_(std::move(table)), kind_(kind) {
        const int n = static_cast<int>(table_.size());
        for (int v : table_)
            if (v < 0 || v >= n)
                throw std::invalid_argument("object map entry out of range");
        if (kind_ != MapKind::Arbitrary) {
            std::uint32_t seen = 0;
            for (int v : table_) {
                if (seen & (1u << v))
                    throw std::invalid_argument("object map is not injective");
                seen |= 1u << v;
            }
            // injective self-map of a finite set is onto
            kind_ = MapKind::Bijective;
        }
    }

    static ObjectMap identity(int n) {
        std::vector<int> t(static_cast<size_t>(n));
        for (int i = 0; i < n; ++i) t[static_cast<size_t>(i)] = i;
        return ObjectMap(std::move(t), MapKind::Bijective);
    }

    int size() const { return static_cast<int>(table_.size()); }
    MapKind kind() const { return kind_; }
    int apply(int i) const { return table_.at(static_cast<size_t>(i)); }
    const std::vector<int>& table() const { return table_; }

    /// Pointwise image {m(x) : x in X}.
    Concept image(const Concept& x) const {
        std::uint32_t out = 0;
        for (int i = 0; i < size(); ++i)
            if (x.contains(i)) out |= 1u << apply(i);
        return Concept(out, x.width());
    }

    ObjectMap inverse() const {
        if (kind_ != MapKind::Bijective)
            throw std::logic_error("inverse requires a bijective map");
        std::vector<int> t(table_.size());
        for (int i = 0; i < size(); ++i) t[static_cast<size_t>(apply(i))] = i;
        return ObjectMap(std::move(t), MapKind::Bijective);
    }

    /// this after other: (f.composeWith(g))(x) = f(g(x)).
    ObjectMap composeWith(const ObjectMap& g) const {
        std::vector<int> t(table_.size());
        for (int i = 0; i < size(); ++i) t[static_cast<size_t>(i)] = apply(g.apply(i));
        MapKind k = (kind_ == MapKind::Bijective && g.kind_ == MapKind::Bijective)
                        ? MapKind::Bijective
                        : MapKind::Arbitrary;
        return ObjectMap(std::move(t), k);
    }

    bool operator==(const ObjectMap& o) const { return table_ == o.table_; }

private:
    std::vector<int> table_;
    MapKind kind_;
};

/// All 2^n subsets in ascending bitmask order.
inline std::vector<Concept> enumerate_concepts(const Domain& d) {
    const int n = d.size();
    std::vector<Concept> out;
    out.reserve(1u << n);
    for (std::uint32_t m = 0; m < (1u << n); ++m)
        out.emplace_back(m, n);
    return out;
}

/// All n! bijections in lexicographic order of their tables.
std::vector<ObjectMap> enumerate_permutations(const Domain& d);

} // namespace absw

#endif
