#include "thickpave/paver.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <condition_variable>
#include <deque>
#include <mutex>
#include <thread>

namespace thickpave {

bool entry_less(const PavingEntry& a, const PavingEntry& b) {
    std::size_t n = std::min(a.box.size(), b.box.size());
    for (std::size_t i = 0; i < n; ++i) {
        if (a.box[i].lo() != b.box[i].lo()) return a.box[i].lo() < b.box[i].lo();
    }
    for (std::size_t i = 0; i < n; ++i) {
        if (a.box[i].hi() != b.box[i].hi()) return a.box[i].hi() < b.box[i].hi();
    }
    return a.box.size() < b.box.size();
}

namespace {

struct Worklist {
    std::mutex mu;
    std::condition_variable cv;
    std::deque<Box> queue;
    int active = 0;
    bool overflow = false;
    std::uint64_t enqueued = 0;
    std::exception_ptr failure;
};

void worker_loop(Worklist& wl, const SetPtr& s, double epsilon,
                 std::uint64_t budget, std::vector<PavingEntry>& local,
                 std::atomic<std::uint64_t>& bisections) try {
    for (;;) {
        Box box;
        {
            std::unique_lock<std::mutex> lock(wl.mu);
            wl.cv.wait(lock, [&] {
                return wl.overflow || !wl.queue.empty() || wl.active == 0;
            });
            if (wl.overflow) return;
            if (wl.queue.empty()) {
                if (wl.active == 0) {
                    wl.cv.notify_all();
                    return;
                }
                continue;
            }
            box = std::move(wl.queue.front());
            wl.queue.pop_front();
            ++wl.active;
        }

        BoxClass cls = classify(s, box);
        if (cls == BoxClass::UNKNOWN && box.width() > epsilon) {
            auto halves = box.bisect();
            bisections.fetch_add(1, std::memory_order_relaxed);
            std::unique_lock<std::mutex> lock(wl.mu);
            wl.enqueued += 2;
            if (wl.enqueued > budget) {
                wl.overflow = true;
                --wl.active;
                wl.cv.notify_all();
                return;
            }
            wl.queue.push_back(std::move(halves.first));
            wl.queue.push_back(std::move(halves.second));
            --wl.active;
            wl.cv.notify_all();
        } else {
            local.push_back({std::move(box), cls});
            std::unique_lock<std::mutex> lock(wl.mu);
            --wl.active;
            if (wl.active == 0 && wl.queue.empty()) wl.cv.notify_all();
        }
    }
} catch (...) {
    std::unique_lock<std::mutex> lock(wl.mu);
    if (!wl.failure) wl.failure = std::current_exception();
    wl.overflow = true;  // stop the pool
    --wl.active;
    wl.cv.notify_all();
}

} // namespace

Paving pave(const SetPtr& s, const Box& domain, double epsilon,
            const PaveOptions& options) {
    if (!(epsilon > 0.0)) throw std::invalid_argument("pave: epsilon must be > 0");
    if (!s) throw std::invalid_argument("pave: null set expression");
    if (domain.size() == 0 || domain.is_empty())
        throw std::invalid_argument("pave: domain must be nonempty");

    auto start = std::chrono::steady_clock::now();

    int workers = std::max(1, options.workers);
    Worklist wl;
    wl.queue.push_back(domain);
    wl.enqueued = 1;
    std::atomic<std::uint64_t> bisections{0};
    std::vector<std::vector<PavingEntry>> locals(static_cast<std::size_t>(workers));

    if (workers == 1) {
        worker_loop(wl, s, epsilon, options.box_budget, locals[0], bisections);
    } else {
        std::vector<std::thread> pool;
        pool.reserve(static_cast<std::size_t>(workers));
        for (int w = 0; w < workers; ++w)
            pool.emplace_back([&, w] {
                worker_loop(wl, s, epsilon, options.box_budget,
                            locals[static_cast<std::size_t>(w)], bisections);
            });
        for (auto& t : pool) t.join();
    }

    Paving paving;
    paving.domain = domain;
    paving.epsilon = epsilon;
    for (auto& local : locals)
        paving.entries.insert(paving.entries.end(),
                              std::make_move_iterator(local.begin()),
                              std::make_move_iterator(local.end()));
    std::sort(paving.entries.begin(), paving.entries.end(), entry_less);

    std::array<std::uint64_t, 4> counts{};
    for (const auto& e : paving.entries) ++counts[static_cast<std::size_t>(e.cls)];

    if (wl.failure) std::rethrow_exception(wl.failure);
    if (wl.overflow)
        throw PaveResourceError(
            "pave: box budget of " + std::to_string(options.box_budget) +
                " exhausted (" + std::to_string(counts[0]) + " IN, " +
                std::to_string(counts[1]) + " PEN, " + std::to_string(counts[2]) +
                " OUT, " + std::to_string(counts[3]) + " UNKNOWN so far)",
            counts, wl.enqueued);

    paving.meta.counts = counts;
    paving.meta.bisections = bisections.load();
    paving.meta.elapsed_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return paving;
}

BoxClass paving_query(const Paving& paving, std::span<const double> x) {
    if (x.size() != paving.domain.size())
        throw std::domain_error("paving_query: point dimension mismatch");
    if (!paving.domain.contains(x))
        throw std::domain_error("paving_query: point outside the paved domain");
    for (const auto& e : paving.entries)
        if (e.box.contains(x)) return e.cls;
    throw std::logic_error("paving_query: no entry contains an in-domain point");
}

} // namespace thickpave
