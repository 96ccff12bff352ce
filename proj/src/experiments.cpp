#include "fblnoma/experiments.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <map>
#include <sstream>

namespace fblnoma {

const char* sweep_var_name(SweepVar v) {
    switch (v) {
        case SweepVar::p2:
            return "p2";
        case SweepVar::r2:
            return "r2";
        case SweepVar::r1:
            return "r1";
        case SweepVar::t0:
            return "t0";
        case SweepVar::n:
            return "n";
        case SweepVar::snr_db:
            return "snr_db";
    }
    return "?";
}

SweepVar parse_sweep_var(const std::string& s) {
    for (auto v : {SweepVar::p2, SweepVar::r2, SweepVar::r1, SweepVar::t0, SweepVar::n,
                   SweepVar::snr_db}) {
        if (s == sweep_var_name(v)) return v;
    }
    throw ConfigError("sweep.var", "unknown sweep variable '" + s +
                                       "' (expected p2, r2, r1, t0, n or snr_db)");
}

Scheme parse_scheme(const std::string& s) {
    for (auto v : {Scheme::noma, Scheme::oma, Scheme::oma_fixed}) {
        if (s == scheme_name(v)) return v;
    }
    throw ConfigError("schemes", "unknown scheme '" + s + "' (expected noma, oma or oma-fixed)");
}

void SweepSpec::validate() const {
    if (points < 1) throw ConfigError("sweep.points", "must be >= 1");
    if (points > 1 && !(start < stop)) throw ConfigError("sweep.start", "need start < stop");
    if (!std::isfinite(start) || !std::isfinite(stop)) {
        throw ConfigError("sweep.start", "range must be finite");
    }
    if (schemes.empty()) throw ConfigError("schemes", "at least one scheme is required");
    if (noma_scan_points < 2) throw ConfigError("solver.scan_points", "must be >= 2");
    try {
        tol.validate();
    } catch (const std::invalid_argument& e) {
        throw ConfigError("solver", e.what());
    }
    if (var == SweepVar::n && start < 1.0) throw ConfigError("sweep.start", "blocklength must be >= 1");
    for (auto s : schemes) {
        if (s != Scheme::noma && (var == SweepVar::p2 || var == SweepVar::r2)) {
            throw ConfigError("schemes", std::string("scheme '") + scheme_name(s) +
                                             "' cannot be swept against " + sweep_var_name(var));
        }
    }
    if (base.fading) {
        if (var == SweepVar::p2 || var == SweepVar::r2 || var == SweepVar::r1) {
            throw ConfigError("sweep.var", "fading scenarios sweep only t0, n or snr_db");
        }
        try {
            base.fading_scenario.validate();
        } catch (const std::invalid_argument& e) {
            throw ConfigError("scenario", e.what());
        }
    } else {
        for (const auto& s : series.empty() ? std::vector<Series>{Series{}} : series) {
            try {
                fixed_gains(apply_series(base, s));
            } catch (const std::invalid_argument& e) {
                throw ConfigError("scenario", e.what());
            }
        }
    }
    if (base.n < 1) throw ConfigError("system.n", "must be >= 1");
    if (!(base.t0 >= 0.0)) throw ConfigError("system.t0", "must be >= 0");
}

std::vector<double> SweepSpec::values() const {
    std::vector<double> v;
    if (points == 1) return {start};
    for (int i = 0; i < points; ++i) {
        v.push_back(i + 1 == points ? stop : start + (stop - start) * i / (points - 1));
    }
    if (var == SweepVar::n) {
        for (auto& x : v) x = std::round(x);
    }
    return v;
}

SystemParams system_params(const Setting& s) {
    return SystemParams(Blocklength(s.n), db_to_linear(s.snr_db), s.t0);
}

ChannelGains fixed_gains(const Setting& s) { return s.fixed.gains(); }

Setting apply_series(const Setting& base, const Series& series) {
    Setting s = base;
    if (series.t0) s.t0 = *series.t0;
    if (series.snr_db) s.snr_db = *series.snr_db;
    if (series.h2_mag) s.fixed.h2_tilde_mag = *series.h2_mag;
    if (series.n) s.n = *series.n;
    return s;
}

namespace {

void fill_noma(ResultRow& row, const SolveReport& rep) {
    row.feasible = rep.feasible;
    row.objective = rep.objective;
    if (!rep.feasible) return;
    row.t2_bar = rep.evaluation.t2_bar;
    row.p1 = rep.decision.p1;
    row.p2 = rep.decision.p2;
    row.r1 = rep.decision.r1;
    row.r2 = rep.decision.r2;
}

void fill_oma(ResultRow& row, const OmaSolution& s) {
    row.feasible = s.feasible;
    row.objective = s.objective();
    if (!s.feasible) return;
    row.t2_bar = s.t2_bar;
    row.p1 = s.decision.p1;
    row.p2 = s.decision.p2;
    row.r1 = s.decision.r1;
    row.r2 = s.decision.r2;
    row.n1 = s.decision.n1;
    row.n2 = s.decision.n2;
}

}  // namespace

ResultRow solve_point(const SweepSpec& spec, const Setting& setting, double value, Scheme scheme,
                      Execution exec) {
    ResultRow row;
    row.sweep_var = sweep_var_name(spec.var);
    row.value = value;
    row.scheme = scheme_name(scheme);

    Setting s = setting;
    switch (spec.var) {
        case SweepVar::t0:
            s.t0 = value;
            break;
        case SweepVar::n:
            s.n = std::lround(value);
            break;
        case SweepVar::snr_db:
            s.snr_db = value;
            break;
        default:
            break;
    }
    const SystemParams params = system_params(s);
    const NomaSearchOptions nopts{spec.noma_scan_points, exec};
    const OmaSearchOptions oopts{exec};

    if (s.fading) {
        const auto mc = monte_carlo_average(s.fading_scenario, params, scheme, spec.tol, exec,
                                            spec.noma_scan_points);
        row.objective = mc.mean;
        row.std_error = mc.std_error;
        row.feasible = mc.feasible > 0;
        return row;
    }

    const ChannelGains gains = fixed_gains(s);
    switch (scheme) {
        case Scheme::noma:
            switch (spec.var) {
                case SweepVar::p2:
                    fill_noma(row, noma_at_p2(gains, params, value, spec.tol));
                    break;
                case SweepVar::r2:
                    fill_noma(row, noma_at_r2(gains, params, value, spec.tol));
                    break;
                case SweepVar::r1:
                    fill_noma(row, noma_at_r1(gains, params, value, spec.tol, nopts));
                    break;
                default:
                    fill_noma(row, optimize_noma(gains, params, spec.tol, nopts));
            }
            break;
        case Scheme::oma:
            fill_oma(row, spec.var == SweepVar::r1
                              ? oma_at_r1(gains, params, value, false, spec.tol, oopts)
                              : optimize_oma(gains, params, spec.tol, oopts));
            break;
        case Scheme::oma_fixed:
            fill_oma(row, spec.var == SweepVar::r1
                              ? oma_at_r1(gains, params, value, true, spec.tol, oopts)
                              : optimize_oma_fixed_slots(gains, params, spec.tol));
            break;
    }
    return row;
}

std::vector<ResultRow> run_sweep(const SweepSpec& spec, Execution exec) {
    spec.validate();
    const auto series = spec.series.empty() ? std::vector<Series>{Series{}} : spec.series;
    const auto values = spec.values();

    struct Task {
        std::size_t series;
        double value;
        Scheme scheme;
    };
    std::vector<Task> tasks;
    for (std::size_t si = 0; si < series.size(); ++si) {
        for (double v : values) {
            for (auto sc : spec.schemes) tasks.push_back({si, v, sc});
        }
    }

    auto run = [&](const Task& t, Execution inner) {
        ResultRow row;
        try {
            row = solve_point(spec, apply_series(spec.base, series[t.series]), t.value, t.scheme, inner);
        } catch (const std::exception&) {
            row = ResultRow{};
            row.sweep_var = sweep_var_name(spec.var);
            row.value = t.value;
            row.scheme = scheme_name(t.scheme);
        }
        if (!series[t.series].label.empty()) row.scheme += "|" + series[t.series].label;
        return row;
    };

    // Fading points parallelize over realizations; fixed-gain sweeps over points.
    if (spec.base.fading) {
        std::vector<ResultRow> rows;
        for (const auto& t : tasks) rows.push_back(run(t, exec));
        return rows;
    }
    return parallel_map<ResultRow>(tasks.size(), exec,
                                   [&](std::size_t i) { return run(tasks[i], Execution::serial); });
}

namespace {

SweepSpec fixed_preset(std::string name, std::string desc, double h1, double h2, double snr_db,
                       long n, double t0) {
    SweepSpec s;
    s.name = std::move(name);
    s.description = std::move(desc);
    s.base.fixed.h1_tilde_mag = h1;
    s.base.fixed.h2_tilde_mag = h2;
    s.base.snr_db = snr_db;
    s.base.n = n;
    s.base.t0 = t0;
    return s;
}

std::vector<SweepSpec> build_presets() {
    const std::vector<Scheme> all{Scheme::noma, Scheme::oma, Scheme::oma_fixed};
    std::vector<SweepSpec> out;

    auto fig2 = fixed_preset("fig2", "T1 of NOMA versus P2 for several T0", 0.8, 0.2, 40.0, 100, 1.0);
    fig2.var = SweepVar::p2;
    fig2.start = 5000.0;
    fig2.stop = 9998.0;
    fig2.points = 2500;
    fig2.series = {{"t0=1", 1.0, {}, {}, {}}, {"t0=1.5", 1.5, {}, {}, {}}, {"t0=2", 2.0, {}, {}, {}}};
    out.push_back(fig2);

    auto fig3 = fixed_preset("fig3", "T1 of NOMA versus R2 for several average SNRs", 0.8, 0.1, 40.0,
                             200, 2.0);
    fig3.var = SweepVar::r2;
    fig3.start = 2.02;
    fig3.stop = 6.0;
    fig3.points = 200;
    fig3.series = {{"snr=30", {}, 30.0, {}, {}}, {"snr=35", {}, 35.0, {}, {}}, {"snr=40", {}, 40.0, {}, {}}};
    out.push_back(fig3);

    auto fig4 = fixed_preset("fig4", "T1 versus R1 for NOMA, OMA and OMA with N1 = N2", 0.8, 0.1, 40.0,
                             200, 3.0);
    fig4.var = SweepVar::r1;
    fig4.start = 0.5;
    fig4.stop = 12.5;
    fig4.points = 49;
    fig4.schemes = all;
    out.push_back(fig4);

    auto fig5 = fixed_preset("fig5", "Maximum T1 versus T0 for several |h2|", 0.8, 0.1, 40.0, 200, 1.0);
    fig5.var = SweepVar::t0;
    fig5.start = 0.5;
    fig5.stop = 5.0;
    fig5.points = 19;
    fig5.schemes = all;
    fig5.series = {{"h2=0.1", {}, {}, 0.1, {}}, {"h2=0.2", {}, {}, 0.2, {}}, {"h2=0.4", {}, {}, 0.4, {}}};
    out.push_back(fig5);

    auto fig6 = fixed_preset("fig6", "Optimal OMA slots of user 1 versus N for several T0 and SNRs",
                             0.8, 0.1, 40.0, 100, 1.0);
    fig6.var = SweepVar::n;
    fig6.start = 50.0;
    fig6.stop = 500.0;
    fig6.points = 10;
    fig6.schemes = {Scheme::oma};
    fig6.series = {{"t0=1 snr=30", 1.0, 30.0, {}, {}},
                   {"t0=2 snr=30", 2.0, 30.0, {}, {}},
                   {"t0=1 snr=40", 1.0, 40.0, {}, {}},
                   {"t0=2 snr=40", 2.0, 40.0, {}, {}}};
    out.push_back(fig6);

    auto fig7 = fixed_preset("fig7", "Maximum T1 versus N, large gain disparity", 0.8, 0.1, 40.0, 100,
                             2.0);
    fig7.var = SweepVar::n;
    fig7.start = 50.0;
    fig7.stop = 2000.0;
    fig7.points = 40;
    fig7.schemes = all;
    out.push_back(fig7);

    auto fig8 = fixed_preset("fig8", "Maximum T1 versus N, small gain disparity", 0.8, 0.4, 30.0, 100,
                             2.0);
    fig8.var = SweepVar::n;
    fig8.start = 50.0;
    fig8.stop = 700.0;
    fig8.points = 14;
    fig8.schemes = all;
    out.push_back(fig8);

    SweepSpec fig9;
    fig9.name = "fig9";
    fig9.description = "Mean maximum T1 versus average SNR over Rayleigh fading with path loss";
    fig9.base.fading = true;
    fig9.base.n = 200;
    fig9.base.t0 = 2.0;
    fig9.base.fading_scenario.d1 = 20.0;
    fig9.base.fading_scenario.d2 = 60.0;
    fig9.base.fading_scenario.alpha = 2.0;
    fig9.base.fading_scenario.seed = 1;
    fig9.base.fading_scenario.realizations = 2000;
    fig9.var = SweepVar::snr_db;
    fig9.start = 60.0;
    fig9.stop = 120.0;
    fig9.points = 7;
    fig9.schemes = all;
    out.push_back(fig9);
    return out;
}

std::string num(double x) {
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof buf, x);
    return std::string(buf, res.ptr);
}

}  // namespace

const std::vector<SweepSpec>& presets() {
    static const std::vector<SweepSpec> all = build_presets();
    return all;
}

const SweepSpec& preset(const std::string& name) {
    for (const auto& p : presets()) {
        if (p.name == name) return p;
    }
    throw ConfigError("preset", "unknown preset '" + name + "' (expected fig2 ... fig9)");
}

std::string describe(const SweepSpec& spec) {
    std::ostringstream os;
    os << spec.name << "  " << spec.description << "\n";
    const Setting& b = spec.base;
    if (b.fading) {
        const auto& f = b.fading_scenario;
        os << "  scenario: fading d1=" << num(f.d1) << " m d2=" << num(f.d2) << " m alpha=" << num(f.alpha)
           << " seed=" << f.seed << " realizations=" << f.realizations << "\n";
    } else {
        os << "  scenario: fixed |h1|=" << num(b.fixed.h1_tilde_mag) << " |h2|=" << num(b.fixed.h2_tilde_mag)
           << " sigma1^2=" << num(b.fixed.sigma1_sq) << " sigma2^2=" << num(b.fixed.sigma2_sq) << "\n";
    }
    os << "  system: snr=" << num(b.snr_db) << "dB n=" << b.n << " t0=" << num(b.t0) << "\n";
    os << "  sweep: " << sweep_var_name(spec.var) << " from " << num(spec.start) << " to " << num(spec.stop)
       << ", " << spec.points << " points\n";
    os << "  schemes:";
    for (auto s : spec.schemes) os << " " << scheme_name(s);
    os << "\n";
    if (!spec.series.empty()) {
        os << "  series:";
        for (const auto& s : spec.series) os << " [" << s.label << "]";
        os << "\n";
    }
    return os.str();
}

std::string csv_header() {
    return "sweep_var,value,scheme,objective,t2_bar,p1,p2,r1,r2,n1,n2,feasible,stderr";
}

namespace {

std::string csv_field(const std::string& s) {
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string q = "\"";
    for (char c : s) {
        if (c == '"') q += '"';
        q += c;
    }
    return q + "\"";
}

std::string opt(const std::optional<double>& x) { return x ? num(*x) : std::string(); }
std::string opt(const std::optional<long>& x) { return x ? std::to_string(*x) : std::string(); }

}  // namespace

void write_csv(std::ostream& out, const std::vector<ResultRow>& rows) {
    out << csv_header() << "\n";
    for (const auto& r : rows) {
        out << csv_field(r.sweep_var) << ',' << num(r.value) << ',' << csv_field(r.scheme) << ','
            << num(r.objective) << ',' << opt(r.t2_bar) << ',' << opt(r.p1) << ',' << opt(r.p2) << ','
            << opt(r.r1) << ',' << opt(r.r2) << ',' << opt(r.n1) << ',' << opt(r.n2) << ','
            << (r.feasible ? 1 : 0) << ',' << opt(r.std_error) << "\n";
    }
}

namespace {

std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> out;
    std::string cur;
    bool quoted = false;
    for (std::size_t i = 0; i < line.size(); ++i) {
        const char c = line[i];
        if (quoted) {
            if (c == '"' && i + 1 < line.size() && line[i + 1] == '"') {
                cur += '"';
                ++i;
            } else if (c == '"') {
                quoted = false;
            } else {
                cur += c;
            }
        } else if (c == '"') {
            quoted = true;
        } else if (c == ',') {
            out.push_back(cur);
            cur.clear();
        } else {
            cur += c;
        }
    }
    out.push_back(cur);
    return out;
}

double parse_num(const std::string& s) {
    double x = 0.0;
    const auto res = std::from_chars(s.data(), s.data() + s.size(), x);
    if (res.ec != std::errc() || res.ptr != s.data() + s.size()) {
        throw std::runtime_error("bad number in csv: '" + s + "'");
    }
    return x;
}

std::optional<double> parse_opt(const std::string& s) {
    if (s.empty()) return std::nullopt;
    return parse_num(s);
}

std::optional<long> parse_opt_long(const std::string& s) {
    if (s.empty()) return std::nullopt;
    return std::lround(parse_num(s));
}

}  // namespace

std::vector<ResultRow> read_csv(std::istream& in) {
    std::string line;
    if (!std::getline(in, line) || line != csv_header()) throw std::runtime_error("missing csv header");
    std::vector<ResultRow> rows;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        const auto f = split_csv_line(line);
        if (f.size() != 13) throw std::runtime_error("csv row with " + std::to_string(f.size()) + " fields");
        ResultRow r;
        r.sweep_var = f[0];
        r.value = parse_num(f[1]);
        r.scheme = f[2];
        r.objective = parse_num(f[3]);
        r.t2_bar = parse_opt(f[4]);
        r.p1 = parse_opt(f[5]);
        r.p2 = parse_opt(f[6]);
        r.r1 = parse_opt(f[7]);
        r.r2 = parse_opt(f[8]);
        r.n1 = parse_opt_long(f[9]);
        r.n2 = parse_opt_long(f[10]);
        r.feasible = f[11] == "1";
        r.std_error = parse_opt(f[12]);
        rows.push_back(std::move(r));
    }
    return rows;
}

void write_svg(std::ostream& out, const std::vector<ResultRow>& rows, const std::string& title) {
    const double w = 800, h = 500, ml = 70, mr = 180, mt = 40, mb = 60;
    std::vector<std::string> order;
    std::map<std::string, std::vector<std::pair<double, double>>> curves;
    double xmin = INFINITY, xmax = -INFINITY, ymin = 0.0, ymax = -INFINITY;
    for (const auto& r : rows) {
        if (!curves.count(r.scheme)) order.push_back(r.scheme);
        curves[r.scheme].emplace_back(r.value, r.objective);
        xmin = std::min(xmin, r.value);
        xmax = std::max(xmax, r.value);
        ymin = std::min(ymin, r.objective);
        ymax = std::max(ymax, r.objective);
    }
    if (rows.empty()) xmin = 0, xmax = 1, ymax = 1;
    if (!(xmax > xmin)) xmin -= 0.5, xmax += 0.5;
    if (!(ymax > ymin)) ymax = ymin + 1.0;
    ymax *= 1.05;
    auto px = [&](double x) { return ml + (x - xmin) / (xmax - xmin) * (w - ml - mr); };
    auto py = [&](double y) { return h - mb - (y - ymin) / (ymax - ymin) * (h - mt - mb); };
    static const char* colors[] = {"#1f77b4", "#d62728", "#2ca02c", "#ff7f0e", "#9467bd",
                                   "#8c564b", "#e377c2", "#7f7f7f", "#bcbd22", "#17becf"};

    out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << w << "\" height=\"" << h
        << "\" font-family=\"sans-serif\" font-size=\"12\">\n";
    out << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    out << "<text x=\"" << w / 2 << "\" y=\"22\" text-anchor=\"middle\" font-size=\"14\">" << title
        << "</text>\n";
    out << "<rect x=\"" << ml << "\" y=\"" << mt << "\" width=\"" << w - ml - mr << "\" height=\""
        << h - mt - mb << "\" fill=\"none\" stroke=\"black\"/>\n";
    for (int i = 0; i <= 5; ++i) {
        const double xv = xmin + (xmax - xmin) * i / 5.0;
        const double yv = ymin + (ymax - ymin) * i / 5.0;
        out << "<text x=\"" << px(xv) << "\" y=\"" << h - mb + 18 << "\" text-anchor=\"middle\">"
            << num(std::round(xv * 1000) / 1000) << "</text>\n";
        out << "<text x=\"" << ml - 6 << "\" y=\"" << py(yv) + 4 << "\" text-anchor=\"end\">"
            << num(std::round(yv * 1000) / 1000) << "</text>\n";
    }
    const std::string xlabel = rows.empty() ? "value" : rows.front().sweep_var;
    out << "<text x=\"" << (ml + w - mr) / 2 << "\" y=\"" << h - 15 << "\" text-anchor=\"middle\">"
        << xlabel << "</text>\n";
    out << "<text x=\"18\" y=\"" << h / 2 << "\" transform=\"rotate(-90 18 " << h / 2
        << ")\" text-anchor=\"middle\">T1 (bps/Hz)</text>\n";
    for (std::size_t k = 0; k < order.size(); ++k) {
        const char* c = colors[k % 10];
        const auto& pts = curves[order[k]];
        if (pts.size() == 1) {
            out << "<circle cx=\"" << px(pts[0].first) << "\" cy=\"" << py(pts[0].second)
                << "\" r=\"4\" fill=\"" << c << "\"/>\n";
        } else {
            out << "<polyline fill=\"none\" stroke=\"" << c << "\" stroke-width=\"1.5\" points=\"";
            for (const auto& [x, y] : pts) out << px(x) << ',' << py(y) << ' ';
            out << "\"/>\n";
        }
        const double ly = mt + 16 * (k + 1);
        out << "<line x1=\"" << w - mr + 10 << "\" y1=\"" << ly - 4 << "\" x2=\"" << w - mr + 30 << "\" y2=\""
            << ly - 4 << "\" stroke=\"" << c << "\" stroke-width=\"2\"/>\n";
        out << "<text x=\"" << w - mr + 36 << "\" y=\"" << ly << "\">" << order[k] << "</text>\n";
    }
    out << "</svg>\n";
}

}  // namespace fblnoma
