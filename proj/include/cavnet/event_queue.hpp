#pragma once

#include <cstdint>
#include <functional>
#include <queue>
#include <vector>

#include "cavnet/errors.hpp"

namespace cavnet {

// Timestamp-ordered event loop. Ties break by insertion sequence, so replay
// is deterministic; the clock never moves backwards.
class EventQueue {
public:
    using Action = std::function<void()>;

    double now_ns() const { return now_ns_; }

    void schedule(Action action, double at_ns) {
        if (at_ns < now_ns_)
            throw std::logic_error("EventQueue: scheduling in the past");
        pending_.push(Entry{at_ns, next_seq_++, std::move(action)});
    }

    // Process events with timestamp <= t_end; returns the processed count.
    std::size_t run_until(double t_end_ns) {
        std::size_t processed = 0;
        while (!pending_.empty() && pending_.top().t_ns <= t_end_ns) {
            Entry e = pending_.top();
            pending_.pop();
            now_ns_ = e.t_ns;
            e.action();
            ++processed;
        }
        if (now_ns_ < t_end_ns) now_ns_ = t_end_ns;
        return processed;
    }

    std::size_t run_all() {
        std::size_t processed = 0;
        while (!pending_.empty()) {
            Entry e = pending_.top();
            pending_.pop();
            now_ns_ = e.t_ns;
            e.action();
            ++processed;
        }
        return processed;
    }

    bool empty() const { return pending_.empty(); }

private:
    struct Entry {
        double t_ns;
        std::uint64_t seq;
        Action action;
    };
    struct Later {
        bool operator()(const Entry& a, const Entry& b) const {
            if (a.t_ns != b.t_ns) return a.t_ns > b.t_ns;
            return a.seq > b.seq;
        }
    };

    std::priority_queue<Entry, std::vector<Entry>, Later> pending_;
    std::uint64_t next_seq_ = 0;
    double now_ns_ = 0.0;
};

} // namespace cavnet
