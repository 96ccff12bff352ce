#pragma once

// Parameter sweeps over the fixed-gain and fading scenarios, the built-in
// figure presets, and CSV / SVG output.

#include <istream>
#include <optional>
#include <ostream>
#include <stdexcept>
#include <string>
#include <vector>

#include "fblnoma/channel.hpp"
#include "fblnoma/noma_opt.hpp"
#include "fblnoma/oma.hpp"
#include "fblnoma/parallel.hpp"

namespace fblnoma {

/// Raised for an invalid sweep or scenario description; `field()` names the
/// offending entry.
class ConfigError : public std::invalid_argument {
public:
    ConfigError(std::string field, const std::string& what)
        : std::invalid_argument(field + ": " + what), field_(std::move(field)) {}
    const std::string& field() const { return field_; }

private:
    std::string field_;
};

enum class SweepVar { p2, r2, r1, t0, n, snr_db };

const char* sweep_var_name(SweepVar v);
SweepVar parse_sweep_var(const std::string& s);   // throws ConfigError
Scheme parse_scheme(const std::string& s);        // throws ConfigError

/// Scenario and system values shared by every point of a sweep. Gains are
/// given as coefficient magnitudes |h_i|; the average transmit SNR is
/// P / sigma^2 with unit noise by default.
struct Setting {
    bool fading = false;
    ScenarioFixed fixed;
    ScenarioFading fading_scenario;
    double snr_db = 40.0;
    long n = 100;
    double t0 = 1.0;
};

/// One curve of a figure: overrides applied on top of the base setting.
struct Series {
    std::string label;
    std::optional<double> t0;
    std::optional<double> snr_db;
    std::optional<double> h2_mag;
    std::optional<long> n;
};

struct SweepSpec {
    std::string name;
    std::string description;
    Setting base;
    SweepVar var = SweepVar::t0;
    double start = 0.0;
    double stop = 1.0;
    int points = 10;
    std::vector<Scheme> schemes{Scheme::noma};
    std::vector<Series> series;  // empty means a single unlabeled curve
    int noma_scan_points = 200;
    Tolerances tol;

    /// Throws ConfigError on an empty range, no schemes, or a scheme/variable
    /// combination that has no meaning (e.g. OMA against P2).
    void validate() const;
    std::vector<double> values() const;
};

struct ResultRow {
    std::string sweep_var;
    double value = 0.0;
    std::string scheme;  // scheme name, with "|label" when the sweep has series
    double objective = 0.0;
    std::optional<double> t2_bar;
    std::optional<double> p1, p2, r1, r2;
    std::optional<long> n1, n2;
    bool feasible = false;
    std::optional<double> std_error;
};

/// Linear power budget and channel gains of a setting.
SystemParams system_params(const Setting& s);
ChannelGains fixed_gains(const Setting& s);
Setting apply_series(const Setting& base, const Series& series);

/// Solves every (series, value, scheme) point. Rows come back in that order.
/// A point whose solve throws is reported as an infeasible row.
std::vector<ResultRow> run_sweep(const SweepSpec& spec, Execution exec = Execution::parallel);

/// Single point of a sweep, exposed for tests.
ResultRow solve_point(const SweepSpec& spec, const Setting& setting, double value, Scheme scheme,
                      Execution exec = Execution::serial);

/// fig2 ... fig9.
const std::vector<SweepSpec>& presets();
const SweepSpec& preset(const std::string& name);  // throws ConfigError
std::string describe(const SweepSpec& spec);

void write_csv(std::ostream& out, const std::vector<ResultRow>& rows);
std::string csv_header();
/// Inverse of write_csv. Throws std::runtime_error on a malformed file.
std::vector<ResultRow> read_csv(std::istream& in);

/// Line plot of objective against the sweep value, one polyline per scheme
/// column value.
void write_svg(std::ostream& out, const std::vector<ResultRow>& rows, const std::string& title);

}  // namespace fblnoma
