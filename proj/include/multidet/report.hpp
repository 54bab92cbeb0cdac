#pragma once

#include <algorithm>
#include <cstddef>
#include <map>
#include <stdexcept>
#include <string>
#include <tuple>
#include <utility>
#include <vector>

namespace multidet {

/** @brief Failure with a machine-readable kind (ParseError, BudgetExceeded, ...). */
class Error : public std::runtime_error {
public:
    Error(std::string kind, const std::string& what)
        : std::runtime_error(kind + ": " + what), kind_(std::move(kind)) {}
    const std::string& kind() const noexcept { return kind_; }
    std::string message() const { return std::string(what()).substr(kind_.size() + 2); }

private:
    std::string kind_;
};

enum class Verdict { pass, fail, note, skip };

inline const char* to_string(Verdict v) {
    switch (v) {
    case Verdict::pass: return "pass";
    case Verdict::fail: return "fail";
    case Verdict::note: return "note";
    case Verdict::skip: return "skip";
    }
    return "?";
}

struct ReportItem {
    std::string check;
    std::string location;
    Verdict verdict = Verdict::pass;
    std::string detail;
};

enum class Status { valid, invalid, error, vacuous };

inline const char* to_string(Status s) {
    switch (s) {
    case Status::valid: return "valid";
    case Status::invalid: return "invalid";
    case Status::error: return "error";
    case Status::vacuous: return "vacuous";
    }
    return "?";
}

/**
 * @brief Ordered list of check outcomes.
 *
 * Individual failures are kept up to a per-check cap; every check also gets a
 * tally so large batteries stay readable. Status is derived, never stored.
 */
class Report {
public:
    explicit Report(std::string command = {}) : command_(std::move(command)) {}

    static constexpr std::size_t kFailCap = 64;

    const std::string& command() const { return command_; }
    void set_command(std::string c) { command_ = std::move(c); }

    /** Records one evaluated cell of a check. */
    void check(const std::string& check, bool ok, const std::string& location = {},
               const std::string& detail = {}) {
        auto& t = tally_[check];
        ++t.total;
        if (!ok) {
            ++t.failed;
            if (t.failed <= kFailCap) items_.push_back({check, location, Verdict::fail, detail});
        }
    }
    /** Variant taking a lazily built location, for hot loops. */
    template <class Loc>
    void check_lazy(const std::string& check, bool ok, Loc&& loc) {
        auto& t = tally_[check];
        ++t.total;
        if (!ok) {
            ++t.failed;
            if (t.failed <= kFailCap) items_.push_back({check, loc(), Verdict::fail, {}});
        }
    }
    void fail(const std::string& check, const std::string& location, const std::string& detail = {}) {
        this->check(check, false, location, detail);
    }
    void note(const std::string& check, const std::string& location, const std::string& detail) {
        items_.push_back({check, location, Verdict::note, detail});
    }
    void skip(const std::string& check, const std::string& location, const std::string& detail) {
        ++tally_[check].skipped;
        if (tally_[check].skipped <= kFailCap) items_.push_back({check, location, Verdict::skip, detail});
    }
    /** Records n passing cells at once. */
    void pass_many(const std::string& check, std::size_t n) {
        if (n) tally_[check].total += n;
    }
    /** Counts a cell as untestable without listing it. */
    void untestable(const std::string& check, std::size_t n = 1) { tally_[check].skipped += n; }

    void merge(const Report& other, const std::string& prefix = {}) {
        for (const auto& it : other.items_) {
            auto copy = it;
            copy.check = prefix + copy.check;
            items_.push_back(std::move(copy));
        }
        for (const auto& [k, t] : other.tally_) {
            auto& mine = tally_[prefix + k];
            mine.total += t.total;
            mine.failed += t.failed;
            mine.skipped += t.skipped;
        }
        if (other.forced_error_) forced_error_ = true;
    }

    void set_error(const std::string& kind, const std::string& message) {
        forced_error_ = true;
        items_.push_back({"error", kind, Verdict::fail, message});
    }

    bool has_error() const { return forced_error_; }

    std::size_t failures() const {
        std::size_t n = 0;
        for (const auto& [k, t] : tally_) n += t.failed;
        return n;
    }
    std::size_t failures(const std::string& check) const {
        auto it = tally_.find(check);
        return it == tally_.end() ? 0 : it->second.failed;
    }
    std::size_t evaluated(const std::string& check) const {
        auto it = tally_.find(check);
        return it == tally_.end() ? 0 : it->second.total;
    }
    /** Names of checks with at least one failure. */
    std::vector<std::string> failing_checks() const {
        std::vector<std::string> out;
        for (const auto& [k, t] : tally_)
            if (t.failed) out.push_back(k);
        return out;
    }

    Status status() const {
        if (forced_error_) return Status::error;
        if (failures()) return Status::invalid;
        std::size_t total = 0;
        for (const auto& [k, t] : tally_) total += t.total;
        return total == 0 ? Status::vacuous : Status::valid;
    }
    bool ok() const { return status() == Status::valid || status() == Status::vacuous; }

    struct Tally {
        std::size_t total = 0, failed = 0, skipped = 0;
    };
    const std::map<std::string, Tally>& tallies() const { return tally_; }
    const std::vector<ReportItem>& items() const { return items_; }

    /** Items sorted by (check, location) for deterministic output. */
    std::vector<ReportItem> sorted_items() const {
        auto v = items_;
        std::stable_sort(v.begin(), v.end(), [](const ReportItem& a, const ReportItem& b) {
            return std::tie(a.check, a.location) < std::tie(b.check, b.location);
        });
        return v;
    }

    std::map<std::string, std::string>& extra() { return extra_; }
    const std::map<std::string, std::string>& extra() const { return extra_; }

private:
    std::string command_;
    std::vector<ReportItem> items_;
    std::map<std::string, Tally> tally_;
    std::map<std::string, std::string> extra_;
    bool forced_error_ = false;
};

inline int exit_code(const Report& r) {
    switch (r.status()) {
    case Status::valid:
    case Status::vacuous: return 0;
    case Status::invalid: return 1;
    case Status::error: return 2;
    }
    return 2;
}

} // namespace multidet
