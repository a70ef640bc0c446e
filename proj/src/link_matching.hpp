#pragma once

#include <functional>
#include <optional>
#include <set>
#include <tuple>
#include <vector>

namespace mg::detail {

// One disjunct per item, then a perfect matching of the chosen connectors in
// which each link joins two different items, compatible connectors, and at
// most one link per item pair and channel. Planarity is not imposed.
template <class Conn>
class LinkMatcher {
public:
    struct Link {
        std::size_t a, b;
        Conn at_a, at_b;
    };
    struct Result {
        std::vector<std::size_t> disjuncts;
        std::vector<Link> links;
    };
    using Compatible = std::function<bool(std::size_t, const Conn&, std::size_t, const Conn&)>;
    using Channel = std::function<int(const Conn&)>;

    LinkMatcher(std::vector<std::vector<std::vector<Conn>>> options, Compatible compatible, Channel channel)
        : options_(std::move(options)), compatible_(std::move(compatible)), channel_(std::move(channel)) {}

    std::optional<Result> run() {
        chosen_.clear();
        if (choose(0)) return result_;
        return std::nullopt;
    }

    // Connectors of (item, disjunct) that no connector of any other item
    // could ever satisfy.
    std::vector<Conn> hopeless(std::size_t item, std::size_t disjunct) const {
        std::vector<Conn> out;
        for (const Conn& c : options_[item][disjunct]) {
            bool any = false;
            for (std::size_t j = 0; j < options_.size() && !any; ++j) {
                if (j == item) continue;
                for (const auto& d : options_[j])
                    for (const Conn& pc : d)
                        if (compatible_(item, c, j, pc)) any = true;
            }
            if (!any) out.push_back(c);
        }
        return out;
    }

    const std::vector<std::vector<std::vector<Conn>>>& options() const { return options_; }

private:
    struct Slot {
        std::size_t item;
        Conn conn;
    };

    bool choose(std::size_t i) {
        if (i == options_.size()) return match_all();
        for (std::size_t d = 0; d < options_[i].size(); ++d) {
            chosen_.push_back(d);
            if (choose(i + 1)) return true;
            chosen_.pop_back();
        }
        return false;
    }

    bool match_all() {
        slots_.clear();
        for (std::size_t i = 0; i < options_.size(); ++i)
            for (const Conn& c : options_[i][chosen_[i]]) slots_.push_back({i, c});
        used_.assign(slots_.size(), false);
        links_.clear();
        pairs_.clear();
        if (!match(0)) return false;
        result_.disjuncts = chosen_;
        result_.links = links_;
        return true;
    }

    bool match(std::size_t k) {
        while (k < slots_.size() && used_[k]) ++k;
        if (k == slots_.size()) return true;
        const Slot& s = slots_[k];
        used_[k] = true;
        for (std::size_t m = k + 1; m < slots_.size(); ++m) {
            if (used_[m]) continue;
            const Slot& t = slots_[m];
            if (t.item == s.item) continue;
            auto key = std::make_tuple(std::min(s.item, t.item), std::max(s.item, t.item), channel_(s.conn));
            if (pairs_.count(key)) continue;
            if (!compatible_(s.item, s.conn, t.item, t.conn)) continue;
            used_[m] = true;
            pairs_.insert(key);
            links_.push_back({s.item, t.item, s.conn, t.conn});
            if (match(k + 1)) return true;
            links_.pop_back();
            pairs_.erase(key);
            used_[m] = false;
        }
        used_[k] = false;
        return false;
    }

    std::vector<std::vector<std::vector<Conn>>> options_;
    Compatible compatible_;
    Channel channel_;
    std::vector<std::size_t> chosen_;
    std::vector<Slot> slots_;
    std::vector<bool> used_;
    std::vector<Link> links_;
    std::set<std::tuple<std::size_t, std::size_t, int>> pairs_;
    Result result_;
};

}  // namespace mg::detail
