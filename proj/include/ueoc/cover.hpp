/*
 * cover.hpp
 *
 * Communities and covers (possibly overlapping sets of communities), with
 * the line-oriented cover file format.
 */

#pragma once

#include <algorithm>
#include <cmath>
#include <istream>
#include <limits>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "graph.hpp"

namespace ueoc {

struct Community {
    std::vector<NodeId> members; // sorted ascending
    double conductance = std::numeric_limits<double>::quiet_NaN();
    NodeId seed = 0;

    std::size_t size() const noexcept { return members.size(); }
    bool contains(NodeId v) const { return std::binary_search(members.begin(), members.end(), v); }
};

class Cover {
public:
    Cover() = default;
    explicit Cover(std::size_t n) : assignment_(n) {}

    std::size_t node_count() const noexcept { return assignment_.size(); }
    std::size_t size() const noexcept { return communities_.size(); }
    bool empty() const noexcept { return communities_.empty(); }

    const std::vector<Community>& communities() const noexcept { return communities_; }
    const Community& operator[](std::size_t k) const { return communities_.at(k); }

    /// Community indices containing v, in insertion order.
    const std::vector<std::size_t>& memberships(NodeId v) const { return assignment_.at(v); }

    void add(Community c) {
        std::sort(c.members.begin(), c.members.end());
        c.members.erase(std::unique(c.members.begin(), c.members.end()), c.members.end());
        if (c.members.empty())
            throw GraphError("community must be non-empty");
        for (NodeId v : c.members) {
            if (v >= assignment_.size())
                throw GraphError("community member out of range");
            assignment_[v].push_back(communities_.size());
        }
        communities_.push_back(std::move(c));
    }

    void add(std::vector<NodeId> members) { add(Community{std::move(members)}); }

    bool covers_all() const {
        return std::all_of(assignment_.begin(), assignment_.end(), [](const auto& a) { return !a.empty(); });
    }

    std::size_t overlapping_node_count() const {
        return static_cast<std::size_t>(
            std::count_if(assignment_.begin(), assignment_.end(), [](const auto& a) { return a.size() > 1; }));
    }

    /// True when both covers hold the same member sets in the same order.
    bool same_sets(const Cover& other) const {
        if (size() != other.size())
            return false;
        for (std::size_t k = 0; k < size(); ++k)
            if (communities_[k].members != other.communities_[k].members)
                return false;
        return true;
    }

    /// True when both covers hold the same member sets, in any order.
    bool equivalent(const Cover& other) const {
        auto sets = [](const Cover& c) {
            std::vector<std::vector<NodeId>> out;
            for (const auto& com : c.communities_)
                out.push_back(com.members);
            std::sort(out.begin(), out.end());
            return out;
        };
        return sets(*this) == sets(other);
    }

    static Cover from_partition(std::span<const std::size_t> labels) {
        std::size_t k = 0;
        for (auto l : labels)
            k = std::max(k, l + 1);
        std::vector<std::vector<NodeId>> groups(k);
        for (NodeId v = 0; v < labels.size(); ++v)
            groups[labels[v]].push_back(v);
        Cover c(labels.size());
        for (auto& gr : groups)
            if (!gr.empty())
                c.add(std::move(gr));
        return c;
    }

private:
    std::vector<Community> communities_;
    std::vector<std::vector<std::size_t>> assignment_;
};

/// One community per line, labels space-separated. Isolated nodes of the
/// network are appended as singleton lines.
inline void write_cover(const Network& net, const Cover& cover, std::ostream& out) {
    for (const auto& c : cover.communities()) {
        bool first = true;
        for (NodeId v : c.members) {
            out << (first ? "" : " ") << net.labels[v];
            first = false;
        }
        out << '\n';
    }
    for (const auto& iso : net.isolated)
        out << iso << '\n';
}

/**
 * Reads a cover file against a network. Labels of isolated nodes are
 * accepted and dropped; lines that become empty are skipped. Unknown labels
 * raise a ParseError.
 */
inline Cover read_cover(const Network& net, std::istream& in) {
    Cover cover(net.graph.node_count());
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        auto first = line.find_first_not_of(" \t\r");
        if (first == std::string::npos || line[first] == '#')
            continue;
        std::istringstream ls(line);
        std::vector<NodeId> members;
        std::string tok;
        while (ls >> tok) {
            auto id = net.find(tok);
            if (id < 0) {
                if (net.is_isolated(tok))
                    continue;
                throw ParseError(lineno, "unknown node label '" + tok + "'");
            }
            members.push_back(static_cast<NodeId>(id));
        }
        if (!members.empty())
            cover.add(std::move(members));
    }
    if (cover.empty())
        throw GraphError("cover file contains no communities");
    return cover;
}

} // namespace ueoc
