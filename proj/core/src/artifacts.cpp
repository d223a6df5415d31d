#include "spsaik/artifacts.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <limits>
#include <ostream>
#include <sstream>

#include <json.hpp>

#include "spsaik/errors.hpp"

namespace spsaik {

using nlohmann::json;

namespace {

std::string num(double v) {
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, res.ptr);
}

std::string fixed(double v, int digits = 3) {
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof(buf), v, std::chars_format::fixed, digits);
    return std::string(buf, res.ptr);
}

std::vector<std::string> split(const std::string& line) {
    std::vector<std::string> cells;
    std::string cell;
    std::istringstream ss(line);
    while (std::getline(ss, cell, ',')) cells.push_back(cell);
    if (!line.empty() && line.back() == ',') cells.emplace_back();
    return cells;
}

double parse_double(const std::string& s, std::size_t line) {
    double v = 0.0;
    const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
    if (res.ec != std::errc() || res.ptr != s.data() + s.size()) {
        throw ParseError("line " + std::to_string(line) + ": bad number '" + s + "'");
    }
    return v;
}

std::uint64_t parse_uint(const std::string& s, std::size_t line) {
    std::uint64_t v = 0;
    const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
    if (res.ec != std::errc() || res.ptr != s.data() + s.size()) {
        throw ParseError("line " + std::to_string(line) + ": bad integer '" + s + "'");
    }
    return v;
}

/// Reads the header, checks it, and hands every data row (as cells) to @p row.
template <class RowFn>
void read_csv(std::istream& in, const std::vector<std::string>& expected, RowFn&& row) {
    std::string line;
    if (!std::getline(in, line)) throw ParseError("empty CSV");
    const auto header = split(line);
    if (header != expected) {
        throw ParseError("line 1: unexpected CSV header '" + line + "'");
    }
    std::size_t line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty()) continue;
        const auto cells = split(line);
        if (cells.size() != header.size()) {
            throw ParseError("line " + std::to_string(line_no) + ": expected " + std::to_string(header.size()) +
                             " columns, got " + std::to_string(cells.size()));
        }
        row(cells, line_no);
    }
}

std::vector<std::string> sweep_columns() { return {"seed", "final_loss", "pos_err", "theta_err", "wall_ms"}; }

std::size_t count_dq_columns(std::istream& in) {
    const auto pos = in.tellg();
    std::string line;
    std::getline(in, line);
    in.clear();
    in.seekg(pos);
    const auto cells = split(line);
    return cells.size() > 5 ? cells.size() - 5 : 0;
}

json maybe(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

json spread_json(const Spread& s) {
    return json{{"median", maybe(s.median)}, {"min", maybe(s.min)}, {"max", maybe(s.max)}};
}

json vec_json(const Eigen::VectorXd& v) { return json(std::vector<double>(v.data(), v.data() + v.size())); }

Eigen::VectorXd vec_from(const json& j, const char* field) {
    if (!j.is_array()) throw ParseError(std::string("result field '") + field + "' must be an array");
    Eigen::VectorXd v(static_cast<Eigen::Index>(j.size()));
    for (std::size_t i = 0; i < j.size(); ++i) {
        if (!j[i].is_number()) throw ParseError(std::string("result field '") + field + "' must hold numbers");
        v[static_cast<Eigen::Index>(i)] = j[i].get<double>();
    }
    return v;
}

}  // namespace

void write_trace_csv(const std::vector<TracePoint>& trace, std::ostream& out) {
    out << "iteration,loss\n";
    for (const auto& p : trace) out << p.iteration << ',' << num(p.loss) << '\n';
}

std::vector<TracePoint> read_trace_csv(std::istream& in) {
    std::vector<TracePoint> trace;
    read_csv(in, {"iteration", "loss"}, [&](const auto& cells, std::size_t line) {
        trace.push_back({static_cast<std::size_t>(parse_uint(cells[0], line)), parse_double(cells[1], line)});
    });
    return trace;
}

void write_sweep_csv(const SweepReport& report, std::ostream& out) {
    out << "seed,final_loss,pos_err,theta_err,wall_ms";
    for (std::size_t j = 1; j <= report.joints; ++j) out << ",dq_" << j;
    out << '\n';
    for (const auto& r : report.runs) {
        out << r.seed << ',' << num(r.final_loss) << ',' << num(r.pos_err) << ',' << num(r.theta_err) << ','
            << num(r.wall_ms);
        for (std::size_t j = 0; j < report.joints; ++j) {
            out << ',' << num(j < r.dq.size() ? r.dq[j] : std::numeric_limits<double>::quiet_NaN());
        }
        out << '\n';
    }
}

SweepReport read_sweep_csv(std::istream& in, std::string scenario_id) {
    const std::size_t joints = count_dq_columns(in);
    std::vector<std::string> header = sweep_columns();
    for (std::size_t j = 1; j <= joints; ++j) header.push_back("dq_" + std::to_string(j));

    std::vector<SeedOutcome> rows;
    read_csv(in, header, [&](const auto& cells, std::size_t line) {
        SeedOutcome o;
        o.seed = parse_uint(cells[0], line);
        o.final_loss = parse_double(cells[1], line);
        o.pos_err = parse_double(cells[2], line);
        o.theta_err = parse_double(cells[3], line);
        o.wall_ms = parse_double(cells[4], line);
        for (std::size_t j = 0; j < joints; ++j) o.dq.push_back(parse_double(cells[5 + j], line));
        rows.push_back(std::move(o));
    });
    return summarize_sweep(std::move(scenario_id), joints, std::move(rows));
}

void write_compare_csv(const ComparisonReport& report, std::ostream& out) {
    out << "seed,nlspsa_final_loss,pso_best_loss\n";
    for (const auto& r : report.rows) out << r.seed << ',' << num(r.nlspsa_loss) << ',' << num(r.pso_loss) << '\n';
}

std::vector<ComparisonRow> read_compare_csv(std::istream& in) {
    std::vector<ComparisonRow> rows;
    read_csv(in, {"seed", "nlspsa_final_loss", "pso_best_loss"}, [&](const auto& cells, std::size_t line) {
        rows.push_back({parse_uint(cells[0], line), parse_double(cells[1], line), parse_double(cells[2], line)});
    });
    return rows;
}

std::string sweep_summary_json(const SweepReport& report) {
    json doc;
    doc["scenario"] = report.scenario_id;
    doc["seeds"] = report.runs.size();
    doc["succeeded"] = report.succeeded();
    doc["failures"] = report.failures;
    doc["final_loss"] = spread_json(report.final_loss);
    doc["wall_ms"] = spread_json(report.wall_ms);
    doc["median_pos_err"] = maybe(report.median_pos_err);
    doc["median_theta_err_deg"] = maybe(report.median_theta_err);
    json dq = json::array();
    for (double v : report.median_dq) dq.push_back(maybe(v));
    doc["median_abs_dq_deg"] = dq;
    return doc.dump(2) + "\n";
}

std::string compare_summary_json(const ComparisonReport& report) {
    json doc;
    doc["scenario"] = report.scenario_id;
    doc["eval_budget"] = report.eval_budget;
    doc["population"] = report.population;
    doc["seeds"] = report.rows.size();
    doc["failures"] = report.failures;
    doc["nlspsa_median_final_loss"] = maybe(report.nlspsa_median);
    doc["pso_median_best_loss"] = maybe(report.pso_median);
    doc["winner"] = report.winner();
    return doc.dump(2) + "\n";
}

std::string result_json(const Scenario& scenario, const RunRecord& record) {
    json doc;
    doc["scenario"] = json::parse(scenario_to_json(scenario));
    doc["seed"] = record.seed;
    doc["iterations"] = record.iterations;
    doc["evaluations"] = record.evaluations;
    doc["diagnostic_evaluations"] = record.diagnostic_evaluations;
    doc["initial_q_deg"] = vec_json(record.initial_iterate);
    doc["final_q_deg"] = vec_json(record.final_iterate);
    doc["final_pose"] = json{{"x", record.final_pose.x}, {"y", record.final_pose.y},
                             {"theta_deg", record.final_pose.theta}};
    doc["initial_loss"] = record.initial_loss;
    doc["final_loss"] = record.final_loss;
    doc["best_loss"] = record.best_loss;
    doc["max_step_deg"] = record.max_step;
    doc["wall_ms"] = record.wall_ms;
    return doc.dump(2) + "\n";
}

RunArtifact parse_result_json(std::string_view text) {
    json doc;
    try {
        doc = json::parse(text);
    } catch (const json::parse_error& e) {
        throw ParseError(std::string("malformed result JSON: ") + e.what());
    }
    try {
        RunArtifact art{scenario_from_json(doc.at("scenario").dump()), RunRecord{}};
        RunRecord& r = art.record;
        r.seed = doc.at("seed").get<std::uint64_t>();
        r.iterations = doc.at("iterations").get<std::size_t>();
        r.evaluations = doc.at("evaluations").get<std::size_t>();
        r.diagnostic_evaluations = doc.at("diagnostic_evaluations").get<std::size_t>();
        r.initial_iterate = vec_from(doc.at("initial_q_deg"), "initial_q_deg");
        r.final_iterate = vec_from(doc.at("final_q_deg"), "final_q_deg");
        const json& pose = doc.at("final_pose");
        r.final_pose = Pose{pose.at("x").get<double>(), pose.at("y").get<double>(), pose.at("theta_deg").get<double>()};
        r.initial_loss = doc.at("initial_loss").get<double>();
        r.final_loss = doc.at("final_loss").get<double>();
        r.best_loss = doc.at("best_loss").get<double>();
        r.max_step = doc.at("max_step_deg").get<double>();
        r.wall_ms = doc.at("wall_ms").get<double>();
        const auto n = static_cast<Eigen::Index>(art.scenario.chain.joints());
        if (r.initial_iterate.size() != n || r.final_iterate.size() != n) {
            throw ParseError("result iterates do not match the scenario's joint count");
        }
        return art;
    } catch (const json::exception& e) {
        throw ParseError(std::string("incomplete result JSON: ") + e.what());
    }
}

namespace {

constexpr double kCanvas = 480.0;
constexpr double kMargin = 30.0;
constexpr std::size_t kMaxPlotPoints = 2000;

struct Frame {
    double min_x, min_y, scale, height;

    double sx(double x) const { return kMargin + (x - min_x) * scale; }
    double sy(double y) const { return height - kMargin - (y - min_y) * scale; }
};

std::string polyline(const Frame& f, const std::vector<Eigen::Vector2d>& pts, const char* color, const char* cls) {
    std::string out = std::string("  <polyline class=\"") + cls + "\" fill=\"none\" stroke=\"" + color +
                      "\" stroke-width=\"2\" stroke-linejoin=\"round\" points=\"";
    for (std::size_t i = 0; i < pts.size(); ++i) {
        if (i) out += ' ';
        out += fixed(f.sx(pts[i].x())) + "," + fixed(f.sy(pts[i].y()));
    }
    return out + "\"/>\n";
}

}  // namespace

std::string posture_svg(const ChainModel& chain, const JointVector& initial, const JointVector& final_q,
                        const Pose& target) {
    const auto before = joint_positions(chain, initial);
    const auto after = joint_positions(chain, final_q);

    double min_x = target.x, max_x = target.x, min_y = target.y, max_y = target.y;
    for (const auto* pts : {&before, &after}) {
        for (const auto& p : *pts) {
            min_x = std::min(min_x, p.x());
            max_x = std::max(max_x, p.x());
            min_y = std::min(min_y, p.y());
            max_y = std::max(max_y, p.y());
        }
    }
    const double span = std::max({max_x - min_x, max_y - min_y, 1e-9});
    const double scale = (kCanvas - 2 * kMargin) / span;
    const double width = 2 * kMargin + (max_x - min_x) * scale;
    const double height = 2 * kMargin + (max_y - min_y) * scale;
    const Frame f{min_x, min_y, scale, height};

    std::string svg = "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + fixed(width, 1) + "\" height=\"" +
                      fixed(height, 1) + "\" viewBox=\"0 0 " + fixed(width, 1) + " " + fixed(height, 1) + "\">\n";
    svg += "  <rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    svg += polyline(f, before, "blue", "initial");
    svg += polyline(f, after, "magenta", "final");
    svg += "  <circle class=\"target\" cx=\"" + fixed(f.sx(target.x)) + "\" cy=\"" + fixed(f.sy(target.y)) +
           "\" r=\"5\" fill=\"green\"/>\n";
    svg += "</svg>\n";
    return svg;
}

std::string convergence_svg(const std::vector<TracePoint>& trace) {
    if (trace.empty()) throw ContractError("convergence plot needs at least one trace point");
    constexpr double kFloor = 1e-300;
    constexpr double kWidth = 640.0, kHeight = 400.0, kLeft = 70.0, kPad = 30.0;

    std::vector<double> logs;
    logs.reserve(trace.size());
    for (const auto& p : trace) logs.push_back(std::log10(std::max(p.loss, kFloor)));
    double lo = std::floor(*std::min_element(logs.begin(), logs.end()));
    double hi = std::ceil(*std::max_element(logs.begin(), logs.end()));
    if (hi <= lo) hi = lo + 1.0;
    const double last_it = static_cast<double>(std::max<std::size_t>(trace.back().iteration, 1));

    auto px = [&](double it) { return kLeft + it / last_it * (kWidth - kLeft - kPad); };
    auto py = [&](double lg) { return kHeight - kPad - (lg - lo) / (hi - lo) * (kHeight - 2 * kPad); };

    std::string svg = "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"640\" height=\"400\" viewBox=\"0 0 640 400\">\n";
    svg += "  <rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    svg += "  <g stroke=\"black\" stroke-width=\"1\">\n";
    svg += "    <line x1=\"" + fixed(kLeft) + "\" y1=\"" + fixed(kHeight - kPad) + "\" x2=\"" + fixed(kWidth - kPad) +
           "\" y2=\"" + fixed(kHeight - kPad) + "\"/>\n";
    svg += "    <line x1=\"" + fixed(kLeft) + "\" y1=\"" + fixed(kPad) + "\" x2=\"" + fixed(kLeft) + "\" y2=\"" +
           fixed(kHeight - kPad) + "\"/>\n";
    svg += "  </g>\n";
    const int decades = static_cast<int>(hi - lo);
    const int label_step = std::max(1, decades / 10);
    svg += "  <g font-family=\"sans-serif\" font-size=\"11\" text-anchor=\"end\">\n";
    for (int e = static_cast<int>(lo); e <= static_cast<int>(hi); e += label_step) {
        svg += "    <text x=\"" + fixed(kLeft - 6) + "\" y=\"" + fixed(py(e) + 4) + "\">1e" + std::to_string(e) +
               "</text>\n";
    }
    svg += "  </g>\n";
    svg += "  <text x=\"" + fixed(kWidth - kPad) + "\" y=\"" + fixed(kHeight - 8) +
           "\" font-family=\"sans-serif\" font-size=\"11\" text-anchor=\"end\">iteration " +
           std::to_string(trace.back().iteration) + "</text>\n";
    svg += "  <polyline class=\"loss\" data-first-loss=\"" + num(trace.front().loss) + "\" data-last-loss=\"" +
           num(trace.back().loss) + "\" fill=\"none\" stroke=\"black\" stroke-width=\"1.5\" points=\"";
    // long traces are thinned; the first and last points are always drawn
    const std::size_t stride = std::max<std::size_t>(1, (trace.size() + kMaxPlotPoints - 1) / kMaxPlotPoints);
    std::vector<std::size_t> picks;
    for (std::size_t i = 0; i < trace.size(); i += stride) picks.push_back(i);
    if (picks.back() != trace.size() - 1) picks.push_back(trace.size() - 1);
    for (std::size_t i : picks) {
        if (i) svg += ' ';
        svg += fixed(px(static_cast<double>(trace[i].iteration))) + "," + fixed(py(logs[i]));
    }
    svg += "\"/>\n</svg>\n";
    return svg;
}

std::string read_text(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open " + path.string());
    std::stringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

void write_text(const std::filesystem::path& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot write " + path.string());
    out << text;
    if (!out) throw IoError("write failed for " + path.string());
}

}  // namespace spsaik
