#include "spsaik/scenarios.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "spsaik/errors.hpp"

namespace spsaik {

using nlohmann::json;

namespace {

struct BuiltinRow {
    const char* id;
    std::size_t joints;
    std::vector<double> q0;
    Pose initial;
    Pose target;
    double first_joint_weight;  ///< Q_jmc = kDegSq / trace * diag{w, 1, ..., 1}
    double initial_loss;
    double final_loss;
};

JointVector to_vector(const std::vector<double>& v) {
    return Eigen::Map<const Eigen::VectorXd>(v.data(), static_cast<Eigen::Index>(v.size()));
}

std::vector<double> spike(std::size_t n, std::size_t index, double value) {
    std::vector<double> v(n, 0.0);
    v[index] = value;
    return v;
}

const std::vector<BuiltinRow>& rows() {
    static const std::vector<BuiltinRow> table = [] {
        const std::vector<double> bent{0, 0, 0, 0, 90, 0, 0, 90};
        const std::vector<double> straight8(8, 0.0);
        // joints 1..9 flat, joint 10 turns 90 deg: nine links along +x, eleven along +y
        const std::vector<double> elbow20 = spike(20, 9, 90.0);
        const std::vector<double> up20 = spike(20, 0, 90.0);
        return std::vector<BuiltinRow>{
            {"1.1", 8, bent, {3, 3, 180}, {4, 3, 180}, 1.0, 0.1401, 4.8879e-4},
            {"1.2", 8, bent, {3, 3, 180}, {3, 4, 180}, 1.0, 0.1401, 2.7151e-4},
            {"1.3", 8, bent, {3, 3, 180}, {4, 4, 180}, 1.0, 0.2801, 1.5279e-3},
            {"1.4", 8, bent, {3, 3, 180}, {3, 3, 240}, 1.0, 0.7679, 1.6323e-3},
            {"1.5", 8, bent, {3, 3, 180}, {2, 4, 240}, 1.0, 1.0481, 1.6447e-3},
            {"1.6", 8, bent, {3, 3, 180}, {2, 4, 240}, 50.0, 1.0481, 6.6408e-4},
            {"1.7", 8, straight8, {8, 0, 0}, {5, 0, 0}, 1.0, 1.2605, 9.6520e-3},
            {"1.8", 8, straight8, {8, 0, 0}, {4, 4, 60}, 1.0, 5.2497, 4.0543e-3},
            {"2.1", 20, elbow20, {9, 11, 90}, {12, 8, 0}, 1.0, 4.2489, 5.3035e-4},
            {"2.2", 20, elbow20, {9, 11, 90}, {0, 19, 90}, 1.0, 20.3081, 1.1707e-3},
            {"2.3", 20, up20, {0, 20, 90}, {12, 12, 135}, 1.0, 29.5636, 9.0259e-4},
        };
    }();
    return table;
}

Scenario make_builtin(const BuiltinRow& row) {
    const auto n = static_cast<Eigen::Index>(row.joints);
    Eigen::VectorXd weights = Eigen::VectorXd::Ones(n);
    weights[0] = row.first_joint_weight;
    const double trace = weights.sum();

    ObjectiveSpec spec;
    spec.target = row.target;
    spec.reference = to_vector(row.q0);
    spec.q_jmc = (kDegSq / trace * weights).asDiagonal();
    return Scenario{row.id, ChainModel::unit(row.joints), spec, row.initial, row.initial_loss, row.final_loss};
}

std::string join_ids() {
    std::string out;
    for (const auto& id : builtin_ids()) {
        if (!out.empty()) out += ", ";
        out += id;
    }
    return out;
}

// ---- JSON reading -------------------------------------------------------

[[noreturn]] void field_error(const std::string& field, const std::string& what) {
    throw ParseError("field '" + field + "': " + what);
}

const json& require(const json& obj, const std::string& key, const std::string& where = "") {
    const auto it = obj.find(key);
    if (it == obj.end()) field_error(where + key, "missing");
    return *it;
}

double read_number(const json& v, const std::string& field) {
    if (!v.is_number()) field_error(field, "expected a number");
    const double x = v.get<double>();
    if (!std::isfinite(x)) field_error(field, "must be finite");
    return x;
}

std::vector<double> read_array(const json& v, const std::string& field) {
    if (!v.is_array()) field_error(field, "expected an array of numbers");
    std::vector<double> out;
    out.reserve(v.size());
    for (std::size_t i = 0; i < v.size(); ++i) {
        out.push_back(read_number(v[i], field + "[" + std::to_string(i) + "]"));
    }
    return out;
}

Eigen::MatrixXd read_matrix(const json& v, const std::string& field) {
    if (!v.is_array() || v.empty()) field_error(field, "expected a non-empty array of rows");
    const auto rows_n = static_cast<Eigen::Index>(v.size());
    Eigen::MatrixXd m(rows_n, rows_n);
    for (Eigen::Index r = 0; r < rows_n; ++r) {
        const std::string row_field = field + "[" + std::to_string(r) + "]";
        const auto row = read_array(v[static_cast<std::size_t>(r)], row_field);
        if (static_cast<Eigen::Index>(row.size()) != rows_n) field_error(row_field, "matrix must be square");
        for (Eigen::Index c = 0; c < rows_n; ++c) m(r, c) = row[static_cast<std::size_t>(c)];
    }
    return m;
}

Eigen::MatrixXd read_weight(const json& doc, const std::string& name) {
    const std::string diag_key = name + "_diag";
    const bool has_diag = doc.contains(diag_key);
    const bool has_full = doc.contains(name);
    if (has_diag == has_full) field_error(name, "give exactly one of '" + diag_key + "' or '" + name + "'");
    if (has_full) return read_matrix(doc.at(name), name);

    const auto diag = read_array(doc.at(diag_key), diag_key);
    if (diag.empty()) field_error(diag_key, "must not be empty");
    for (std::size_t i = 0; i < diag.size(); ++i) {
        if (diag[i] <= 0.0) {
            throw ScenarioError("field '" + diag_key + "[" + std::to_string(i) +
                                "]': diagonal weight must be positive");
        }
    }
    return to_vector(diag).asDiagonal();
}

Pose read_pose(const json& v, const std::string& field) {
    if (!v.is_object()) field_error(field, "expected an object with x, y, theta_deg");
    return Pose{read_number(require(v, "x", field + "."), field + ".x"),
                read_number(require(v, "y", field + "."), field + ".y"),
                read_number(require(v, "theta_deg", field + "."), field + ".theta_deg")};
}

// ---- JSON writing -------------------------------------------------------

json write_pose(const Pose& p) { return json{{"x", p.x}, {"y", p.y}, {"theta_deg", p.theta}}; }

json write_vector(const Eigen::VectorXd& v) { return json(std::vector<double>(v.data(), v.data() + v.size())); }

bool is_diagonal(const Eigen::MatrixXd& m) {
    for (Eigen::Index r = 0; r < m.rows(); ++r)
        for (Eigen::Index c = 0; c < m.cols(); ++c)
            if (r != c && m(r, c) != 0.0) return false;
    return true;
}

void write_weight(json& doc, const std::string& name, const Eigen::MatrixXd& m) {
    if (is_diagonal(m)) {
        doc[name + "_diag"] = write_vector(m.diagonal());
        return;
    }
    json rows_json = json::array();
    for (Eigen::Index r = 0; r < m.rows(); ++r) rows_json.push_back(write_vector(m.row(r).transpose()));
    doc[name] = rows_json;
}

}  // namespace

const std::vector<std::string>& builtin_ids() {
    static const std::vector<std::string> ids = [] {
        std::vector<std::string> out;
        for (const auto& row : rows()) out.emplace_back(row.id);
        return out;
    }();
    return ids;
}

Scenario builtin(std::string_view id) {
    for (const auto& row : rows()) {
        if (id == row.id) return make_builtin(row);
    }
    throw ScenarioError("unknown scenario '" + std::string(id) + "'; valid ids: " + join_ids());
}

void check_consistency(const Scenario& s) {
    s.spec.validate(s.chain);
    if (s.expected_initial_pose) {
        const Pose fk = forward_kinematics(s.chain, s.spec.reference);
        const Pose& want = *s.expected_initial_pose;
        if (std::abs(fk.x - want.x) > kPoseTolerance || std::abs(fk.y - want.y) > kPoseTolerance ||
            std::abs(fk.theta - want.theta) > kPoseTolerance) {
            std::ostringstream msg;
            msg << "scenario " << s.id << ": FK(q0) = (" << fk.x << ", " << fk.y << ", " << fk.theta
                << ") does not match expected initial pose (" << want.x << ", " << want.y << ", " << want.theta
                << ")";
            throw ScenarioError(msg.str());
        }
    }
    if (s.expected_initial_loss) {
        const double loss = combined_loss(s.spec, s.chain, s.spec.reference);
        if (std::abs(loss - *s.expected_initial_loss) > kInitialLossTolerance) {
            std::ostringstream msg;
            msg << "scenario " << s.id << ": initial loss " << loss << " does not match expected "
                << *s.expected_initial_loss;
            throw ScenarioError(msg.str());
        }
    }
}

Scenario scenario_from_json(std::string_view text) {
    json doc;
    try {
        doc = json::parse(text);
    } catch (const json::parse_error& e) {
        throw ParseError(std::string("malformed scenario JSON: ") + e.what());
    }
    if (!doc.is_object()) throw ParseError("scenario document must be a JSON object");

    const json& id_json = require(doc, "id");
    if (!id_json.is_string()) field_error("id", "expected a string");

    const auto lengths = read_array(require(doc, "link_lengths"), "link_lengths");
    const auto q0 = read_array(require(doc, "q0_deg"), "q0_deg");

    std::optional<JointLimits> limits;
    if (const auto it = doc.find("joint_limits"); it != doc.end() && !it->is_null()) {
        if (!it->is_object()) field_error("joint_limits", "expected an object with min_deg and max_deg");
        limits = JointLimits{to_vector(read_array(require(*it, "min_deg", "joint_limits."), "joint_limits.min_deg")),
                             to_vector(read_array(require(*it, "max_deg", "joint_limits."), "joint_limits.max_deg"))};
    }

    ObjectiveSpec spec;
    spec.target = read_pose(require(doc, "target"), "target");
    spec.reference = to_vector(q0);
    spec.r_ee = [&] {
        const Eigen::MatrixXd m = read_weight(doc, "r_ee");
        if (m.rows() != 3) field_error("r_ee", "must be 3x3");
        return Eigen::Matrix3d(m);
    }();
    spec.q_jmc = read_weight(doc, "q_jmc");
    spec.w_jmc = read_number(require(doc, "w_jmc"), "w_jmc");
    spec.w_ee = read_number(require(doc, "w_ee"), "w_ee");

    const std::string id = id_json.get<std::string>();
    auto fail = [&](const std::exception& e) -> ScenarioError {
        return ScenarioError("scenario " + id + ": " + e.what());
    };

    std::optional<ChainModel> chain;
    try {
        chain.emplace(lengths, limits);
        spec.validate(*chain);
    } catch (const ContractError& e) {
        throw fail(e);
    }

    Scenario s{id, *chain, spec, std::nullopt, std::nullopt, std::nullopt};
    if (const auto it = doc.find("expected"); it != doc.end() && !it->is_null()) {
        if (!it->is_object()) field_error("expected", "expected an object");
        if (it->contains("initial_pose")) s.expected_initial_pose = read_pose(it->at("initial_pose"), "expected.initial_pose");
        if (it->contains("initial_loss")) s.expected_initial_loss = read_number(it->at("initial_loss"), "expected.initial_loss");
        if (it->contains("reported_final_loss")) {
            s.reported_final_loss = read_number(it->at("reported_final_loss"), "expected.reported_final_loss");
        }
    }
    check_consistency(s);
    return s;
}

std::string scenario_to_json(const Scenario& s) {
    json doc;
    doc["id"] = s.id;
    doc["link_lengths"] = s.chain.link_lengths();
    doc["q0_deg"] = write_vector(s.spec.reference);
    doc["target"] = write_pose(s.spec.target);
    write_weight(doc, "r_ee", s.spec.r_ee);
    write_weight(doc, "q_jmc", s.spec.q_jmc);
    doc["w_jmc"] = s.spec.w_jmc;
    doc["w_ee"] = s.spec.w_ee;
    if (const auto& lim = s.chain.limits()) {
        doc["joint_limits"] = json{{"min_deg", write_vector(lim->lower)}, {"max_deg", write_vector(lim->upper)}};
    }
    json expected = json::object();
    if (s.expected_initial_pose) expected["initial_pose"] = write_pose(*s.expected_initial_pose);
    if (s.expected_initial_loss) expected["initial_loss"] = *s.expected_initial_loss;
    if (s.reported_final_loss) expected["reported_final_loss"] = *s.reported_final_loss;
    if (!expected.empty()) doc["expected"] = expected;
    return doc.dump(2) + "\n";
}

Scenario load_scenario(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open scenario file " + path.string());
    std::stringstream buf;
    buf << in.rdbuf();
    try {
        return scenario_from_json(buf.str());
    } catch (const ParseError& e) {
        throw ParseError(path.string() + ": " + e.what());
    }
}

void save_scenario(const Scenario& scenario, const std::filesystem::path& path) {
    std::ofstream out(path);
    if (!out) throw IoError("cannot write scenario file " + path.string());
    out << scenario_to_json(scenario);
    if (!out) throw IoError("write failed for " + path.string());
}

Scenario resolve_scenario(std::string_view id_or_path) {
    for (const auto& id : builtin_ids()) {
        if (id == id_or_path) return builtin(id_or_path);
    }
    const std::filesystem::path path(id_or_path);
    if (std::filesystem::exists(path)) return load_scenario(path);
    throw ScenarioError("unknown scenario '" + std::string(id_or_path) + "' (not a file); valid ids: " + join_ids());
}

}  // namespace spsaik
