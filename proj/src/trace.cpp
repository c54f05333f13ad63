#include "gatewave/trace.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>
#include <stdexcept>

#include "gatewave/csvio.hpp"
#include "gatewave/errors.hpp"

namespace gatewave {

Trace::Trace(std::vector<std::string> names, std::vector<char> units)
    : names_(std::move(names)), units_(std::move(units)) {
    if (names_.size() != units_.size())
        throw std::invalid_argument("trace: names/units size mismatch");
    data_.resize(names_.size());
}

void Trace::append(double t, const double* values) {
    if (!times_.empty() && !(t > times_.back()))
        throw SimError("trace: non-increasing time sample");
    if (!std::isfinite(t)) throw SimError("trace: non-finite time");
    for (std::size_t c = 0; c < data_.size(); ++c) {
        if (!std::isfinite(values[c]))
            throw SimError("trace: non-finite value in series " + names_[c]);
    }
    times_.push_back(t);
    for (std::size_t c = 0; c < data_.size(); ++c) data_[c].push_back(values[c]);
}

void Trace::add_event(double t, std::string label) {
    events_.push_back({t, std::move(label)});
}

bool Trace::has_series(const std::string& name) const {
    return std::find(names_.begin(), names_.end(), name) != names_.end();
}

std::size_t Trace::column(const std::string& name) const {
    auto it = std::find(names_.begin(), names_.end(), name);
    if (it == names_.end()) throw SimError("trace: no series named " + name);
    return static_cast<std::size_t>(it - names_.begin());
}

const std::vector<double>& Trace::series(const std::string& name) const {
    return data_[column(name)];
}

double Trace::span_begin() const {
    if (times_.empty()) throw SimError("trace: empty");
    return times_.front();
}

double Trace::span_end() const {
    if (times_.empty()) throw SimError("trace: empty");
    return times_.back();
}

double Trace::interpolate(std::size_t col, double t) const {
    const auto& ts = times_;
    const auto& ys = data_[col];
    if (t <= ts.front()) return ys.front();
    if (t >= ts.back()) return ys.back();
    auto it = std::upper_bound(ts.begin(), ts.end(), t);
    const std::size_t i = static_cast<std::size_t>(it - ts.begin());
    const double w = (t - ts[i - 1]) / (ts[i] - ts[i - 1]);
    return ys[i - 1] + w * (ys[i] - ys[i - 1]);
}

double Trace::integral(std::size_t col) const {
    const auto& ys = data_[col];
    double acc = 0.0;
    for (std::size_t i = 1; i < times_.size(); ++i)
        acc += 0.5 * (ys[i] + ys[i - 1]) * (times_[i] - times_[i - 1]);
    return acc;
}

double Trace::average(const std::string& name) const {
    const double span = span_end() - span_begin();
    if (!(span > 0.0)) throw SimError("trace: zero span");
    return integral(column(name)) / span;
}

void Trace::write_csv(std::ostream& os) const {
    os << "time_s";
    for (const auto& n : names_) os << ',' << n;
    os << '\n';
    for (std::size_t i = 0; i < times_.size(); ++i) {
        os << fmt_g12(times_[i]);
        for (const auto& col : data_) os << ',' << fmt_g12(col[i]);
        os << '\n';
    }
}

}  // namespace gatewave
