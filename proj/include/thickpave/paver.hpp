#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "thickpave/thickset.hpp"

namespace thickpave {

struct PavingEntry {
    Box box;
    BoxClass cls;

    bool operator==(const PavingEntry& other) const {
        return box == other.box && cls == other.cls;
    }
};

// Canonical entry order: lexicographic by box lower corners, then upper.
bool entry_less(const PavingEntry& a, const PavingEntry& b);

/**
 * Epsilon-resolved partition of a domain box into classified boxes.
 * Entries have disjoint interiors, cover the domain, are canonically
 * sorted, and every UNKNOWN entry has width <= epsilon.
 */
struct Paving {
    Box domain;
    double epsilon = 0.0;
    std::vector<PavingEntry> entries;

    struct Meta {
        double elapsed_seconds = 0.0;
        std::uint64_t bisections = 0;
        std::array<std::uint64_t, 4> counts{};  // indexed by BoxClass
    } meta;

    std::uint64_t count(BoxClass c) const {
        return meta.counts[static_cast<std::size_t>(c)];
    }
};

struct PaveOptions {
    int workers = 1;
    std::uint64_t box_budget = 10'000'000;
};

// Worklist exhausted the configured box budget; carries what was counted
// before the run stopped.
class PaveResourceError : public std::runtime_error {
public:
    PaveResourceError(std::string msg, std::array<std::uint64_t, 4> partial_counts,
                      std::uint64_t boxes_enqueued)
        : std::runtime_error(std::move(msg)),
          partial_counts_(partial_counts),
          boxes_enqueued_(boxes_enqueued) {}

    const std::array<std::uint64_t, 4>& partial_counts() const { return partial_counts_; }
    std::uint64_t boxes_enqueued() const { return boxes_enqueued_; }

private:
    std::array<std::uint64_t, 4> partial_counts_;
    std::uint64_t boxes_enqueued_;
};

/**
 * SIVIA-style paving: classifies boxes, emits the definite ones, bisects
 * UNKNOWN boxes wider than epsilon. The output is identical for any
 * worker count. Throws std::invalid_argument for epsilon <= 0 or an empty
 * domain and PaveResourceError past the box budget.
 */
Paving pave(const SetPtr& s, const Box& domain, double epsilon,
            const PaveOptions& options = {});

// Class of the entry containing x; points on shared faces resolve to the
// canonically first entry. Throws std::domain_error outside the domain.
BoxClass paving_query(const Paving& paving, std::span<const double> x);

} // namespace thickpave
