#pragma once

#include <cstddef>
#include <iosfwd>
#include <string>
#include <vector>

namespace gatewave {

struct TraceEvent {
    double time_s;
    std::string label;
};

/// Time-stamped waveform record of one simulation: a strictly increasing
/// time axis plus one named series per node voltage / branch current /
/// derived quantity. All series share the time axis; only finite values
/// are accepted.
class Trace {
public:
    Trace() = default;
    Trace(std::vector<std::string> names, std::vector<char> units);

    void append(double t, const double* values);
    void add_event(double t, std::string label);

    std::size_t size() const { return times_.size(); }
    bool empty() const { return times_.empty(); }
    std::size_t num_series() const { return names_.size(); }

    double time(std::size_t i) const { return times_[i]; }
    const std::vector<double>& times() const { return times_; }
    const std::vector<double>& series(std::size_t col) const { return data_[col]; }
    const std::vector<double>& series(const std::string& name) const;
    double value(std::size_t col, std::size_t i) const { return data_[col][i]; }

    bool has_series(const std::string& name) const;
    std::size_t column(const std::string& name) const;
    const std::vector<std::string>& names() const { return names_; }
    char unit(std::size_t col) const { return units_[col]; }
    const std::vector<TraceEvent>& events() const { return events_; }

    double span_begin() const;
    double span_end() const;

    /// Linear interpolation of one series at time t (t inside the span).
    double interpolate(std::size_t col, double t) const;

    /// Trapezoidal integral of a series over the whole span.
    double integral(std::size_t col) const;
    double integral(const std::string& name) const { return integral(column(name)); }

    /// Time average of a series over the whole span.
    double average(const std::string& name) const;

    /// CSV export: time_s first, then one column per series, 12 significant
    /// digits.
    void write_csv(std::ostream& os) const;

private:
    std::vector<std::string> names_;
    std::vector<char> units_;
    std::vector<double> times_;
    std::vector<std::vector<double>> data_;  // per series
    std::vector<TraceEvent> events_;
};

}  // namespace gatewave
