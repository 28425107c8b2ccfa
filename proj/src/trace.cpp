#include "zenoplan/trace.hpp"

#include <cctype>
#include <istream>
#include <ostream>
#include <stdexcept>

namespace zenoplan {

void write_trace_jsonl(std::ostream& os, const RunTrace& trace,
                       const std::vector<std::string>& header) {
    for (const std::string& line : header) os << "# " << line << "\n";
    for (const TraceSnapshot& s : trace.snapshots) {
        os << "{\"t_seconds\":" << s.t.to_string() << ",\"evals\":" << s.evals
           << ",\"best_fitness\":" << s.best_fitness.to_string() << ",\"points\":[";
        for (std::size_t i = 0; i < s.points.size(); ++i) {
            if (i) os << ",";
            os << "[" << s.points[i].makespan.to_string() << "," << s.points[i].cost.to_string()
               << "]";
        }
        os << "]}\n";
    }
}

namespace {

// Fixed-schema scanner for the lines written above. Values are parsed as
// exact decimals; a tolerant JSON library would round them through double.
class LineScanner {
public:
    explicit LineScanner(const std::string& line) : s_(line) {}

    void expect(std::string_view lit) {
        if (s_.compare(pos_, lit.size(), lit) != 0)
            throw std::runtime_error("trace: expected '" + std::string(lit) + "' in: " + s_);
        pos_ += lit.size();
    }
    bool peek(char c) const { return pos_ < s_.size() && s_[pos_] == c; }
    void skip(char) { ++pos_; }

    Rat number() {
        std::size_t start = pos_;
        while (pos_ < s_.size() && (std::isdigit(static_cast<unsigned char>(s_[pos_])) ||
                                    s_[pos_] == '-' || s_[pos_] == '+' || s_[pos_] == '.' ||
                                    s_[pos_] == '/'))
            ++pos_;
        if (pos_ == start) throw std::runtime_error("trace: number expected in: " + s_);
        return Rat::parse(std::string_view(s_).substr(start, pos_ - start));
    }

private:
    const std::string& s_;
    std::size_t pos_ = 0;
};

} // namespace

RunTrace read_trace_jsonl(std::istream& is) {
    RunTrace trace;
    std::string line;
    while (std::getline(is, line)) {
        if (line.empty() || line[0] == '#') continue;
        LineScanner sc(line);
        TraceSnapshot snap;
        sc.expect("{\"t_seconds\":");
        snap.t = sc.number();
        sc.expect(",\"evals\":");
        snap.evals = static_cast<std::uint64_t>(sc.number().num());
        sc.expect(",\"best_fitness\":");
        snap.best_fitness = sc.number();
        sc.expect(",\"points\":[");
        while (sc.peek('[')) {
            sc.skip('[');
            Rat m = sc.number();
            sc.expect(",");
            Rat c = sc.number();
            sc.expect("]");
            snap.points.push_back({m, c});
            if (sc.peek(',')) sc.skip(',');
        }
        sc.expect("]}");
        trace.snapshots.push_back(std::move(snap));
    }
    return trace;
}

} // namespace zenoplan
