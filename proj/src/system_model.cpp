#include "swreg/system_model.hpp"

#include <fstream>
#include <sstream>

#include "json.hpp"

namespace swreg {

namespace {

using nlohmann::json;

std::string dims(const Mat& M) {
    std::ostringstream os;
    os << M.rows() << "x" << M.cols();
    return os.str();
}

Mat matrix_from_json(const json& j, const std::string& where) {
    if (!j.is_array() || j.empty())
        throw InputError(where + ": expected a non-empty array of rows");
    const auto rows = j.size();
    if (!j[0].is_array() || j[0].empty())
        throw InputError(where + ": expected non-empty numeric rows");
    const auto cols = j[0].size();
    Mat M(rows, cols);
    for (std::size_t r = 0; r < rows; ++r) {
        if (!j[r].is_array() || j[r].size() != cols)
            throw InputError(where + ": ragged rows");
        for (std::size_t c = 0; c < cols; ++c) {
            if (!j[r][c].is_number())
                throw InputError(where + ": non-numeric entry");
            M(r, c) = j[r][c].get<double>();
        }
    }
    return M;
}

json matrix_to_json(const Mat& M) {
    json rows = json::array();
    for (Eigen::Index r = 0; r < M.rows(); ++r) {
        json row = json::array();
        for (Eigen::Index c = 0; c < M.cols(); ++c)
            row.push_back(M(r, c));
        rows.push_back(row);
    }
    return rows;
}

}  // namespace

void SwitchingPlant::validate() const {
    require(!modes.empty(), "plant: modes list is empty");
    require(sampling_time > 0.0, "plant: sampling_time must be positive");
    const auto n = modes[0].A.rows();
    const auto m = modes[0].B.cols();
    const auto p = modes[0].C.rows();
    require(n >= 1 && m >= 1 && p >= 1, "plant: dimensions must be positive");
    for (std::size_t i = 0; i < modes.size(); ++i) {
        const auto& md = modes[i];
        const std::string at = "plant mode " + std::to_string(i + 1);
        require(md.A.rows() == n && md.A.cols() == n,
                at + ": A is " + dims(md.A) + ", expected " + std::to_string(n) +
                    "x" + std::to_string(n));
        require(md.B.rows() == n && md.B.cols() == m,
                at + ": B is " + dims(md.B) + ", expected " + std::to_string(n) +
                    "x" + std::to_string(m));
        require(md.C.rows() == p && md.C.cols() == n,
                at + ": C is " + dims(md.C) + ", expected " + std::to_string(p) +
                    "x" + std::to_string(n));
    }
}

void Exosystem::validate() const {
    require(!modes.empty(), "exosystem: modes list is empty");
    const auto q = modes[0].Ag.rows();
    const auto p = modes[0].Eg.rows();
    require(q >= 1 && p >= 1, "exosystem: dimensions must be positive");
    for (std::size_t i = 0; i < modes.size(); ++i) {
        const auto& md = modes[i];
        const std::string at = "exosystem mode " + std::to_string(i + 1);
        require(md.Ag.rows() == q && md.Ag.cols() == q,
                at + ": Ag is " + dims(md.Ag) + ", expected " + std::to_string(q) +
                    "x" + std::to_string(q));
        require(md.Eg.rows() == p && md.Eg.cols() == q,
                at + ": Eg is " + dims(md.Eg) + ", expected " + std::to_string(p) +
                    "x" + std::to_string(q));
    }
}

SwitchingSignal::SwitchingSignal(std::vector<Segment> segments)
    : segments_(std::move(segments)) {
    require(!segments_.empty(), "signal: no segments");
    require(segments_.front().start == 0, "signal: first segment must start at step 0");
    int expected = 0;
    for (const auto& s : segments_) {
        require(s.mode_label >= 1, "signal: mode labels are 1-based");
        require(s.start == expected,
                "signal: segments must be contiguous and non-overlapping (step " +
                    std::to_string(s.start) + " vs expected " + std::to_string(expected) + ")");
        require(s.end >= s.start, "signal: segment end before start");
        expected = s.end + 1;
    }
}

SwitchingSignal SwitchingSignal::parse(const std::string& text) {
    require(!text.empty() && text.back() != ',',
            "signal: empty or trailing-comma specification");
    std::vector<Segment> segs;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        int mode = 0, a = 0, b = 0;
        char colon = 0, dash = 0;
        std::istringstream is(item);
        if (!(is >> mode >> colon >> a >> dash >> b) || colon != ':' || dash != '-' ||
            !(is >> std::ws).eof())
            throw InputError("signal: malformed segment '" + item +
                             "' (expected mode:start-end)");
        segs.push_back({mode, a, b});
    }
    require(!segs.empty(), "signal: empty specification");
    return SwitchingSignal(std::move(segs));
}

SwitchingSignal SwitchingSignal::constant(int mode_label, int horizon) {
    require(horizon >= 1, "signal: horizon must be positive");
    return SwitchingSignal({{mode_label, 0, horizon - 1}});
}

int SwitchingSignal::mode_at(int step) const {
    require(step >= 0 && step <= last_step(),
            "signal: step " + std::to_string(step) + " outside [0, " +
                std::to_string(last_step()) + "]");
    for (const auto& s : segments_)
        if (step <= s.end)
            return s.mode_label;
    return segments_.back().mode_label;  // unreachable
}

void SwitchingSignal::validate(int num_modes, int horizon) const {
    for (const auto& s : segments_)
        require(s.mode_label <= num_modes,
                "signal: mode label " + std::to_string(s.mode_label) +
                    " exceeds mode count " + std::to_string(num_modes));
    require(last_step() >= horizon - 1,
            "signal: covers steps up to " + std::to_string(last_step()) +
                " but horizon is " + std::to_string(horizon));
}

std::string SwitchingSignal::to_string() const {
    std::ostringstream os;
    for (std::size_t i = 0; i < segments_.size(); ++i) {
        if (i)
            os << ",";
        os << segments_[i].mode_label << ":" << segments_[i].start << "-"
           << segments_[i].end;
    }
    return os.str();
}

std::pair<SwitchingPlant, Exosystem> parse_problem(const std::string& text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::exception& e) {
        throw InputError(std::string("problem file: parse error: ") + e.what());
    }
    if (!j.is_object() || !j.contains("modes") || !j.contains("exosystem"))
        throw InputError("problem file: expected object with 'modes' and 'exosystem'");

    SwitchingPlant plant;
    if (j.contains("sampling_time")) {
        if (!j["sampling_time"].is_number())
            throw InputError("problem file: sampling_time must be a number");
        plant.sampling_time = j["sampling_time"].get<double>();
    }
    if (!j["modes"].is_array() || j["modes"].empty())
        throw InputError("problem file: 'modes' must be a non-empty array");
    int idx = 1;
    for (const auto& jm : j["modes"]) {
        const std::string at = "mode " + std::to_string(idx++);
        if (!jm.contains("A") || !jm.contains("B") || !jm.contains("C"))
            throw InputError(at + ": needs A, B, C");
        plant.modes.push_back({matrix_from_json(jm["A"], at + ": A"),
                               matrix_from_json(jm["B"], at + ": B"),
                               matrix_from_json(jm["C"], at + ": C")});
    }

    Exosystem exo;
    if (!j["exosystem"].is_array() || j["exosystem"].empty())
        throw InputError("problem file: 'exosystem' must be a non-empty array");
    idx = 1;
    for (const auto& jm : j["exosystem"]) {
        const std::string at = "exosystem mode " + std::to_string(idx++);
        if (!jm.contains("Ag") || !jm.contains("Eg"))
            throw InputError(at + ": needs Ag, Eg");
        exo.modes.push_back({matrix_from_json(jm["Ag"], at + ": Ag"),
                             matrix_from_json(jm["Eg"], at + ": Eg")});
    }

    plant.validate();
    exo.validate();
    require(exo.num_modes() == plant.num_modes(),
            "problem file: exosystem has " + std::to_string(exo.num_modes()) +
                " modes, plant has " + std::to_string(plant.num_modes()));
    require(exo.output_dim() == plant.output_dim(),
            "problem file: exosystem output count " +
                std::to_string(exo.output_dim()) + " does not match plant output count " +
                std::to_string(plant.output_dim()));
    return {std::move(plant), std::move(exo)};
}

std::pair<SwitchingPlant, Exosystem> load_problem(const std::string& path) {
    std::ifstream in(path);
    if (!in)
        throw InputError("cannot open problem file: " + path);
    std::stringstream buf;
    buf << in.rdbuf();
    return parse_problem(buf.str());
}

std::string serialize_problem(const SwitchingPlant& plant, const Exosystem& exo) {
    plant.validate();
    exo.validate();
    json j;
    j["sampling_time"] = plant.sampling_time;
    j["modes"] = json::array();
    for (const auto& md : plant.modes)
        j["modes"].push_back({{"A", matrix_to_json(md.A)},
                              {"B", matrix_to_json(md.B)},
                              {"C", matrix_to_json(md.C)}});
    j["exosystem"] = json::array();
    for (const auto& md : exo.modes)
        j["exosystem"].push_back({{"Ag", matrix_to_json(md.Ag)},
                                  {"Eg", matrix_to_json(md.Eg)}});
    return j.dump(2) + "\n";
}

void save_problem(const SwitchingPlant& plant, const Exosystem& exo,
                  const std::string& path) {
    std::ofstream out(path);
    if (!out)
        throw InputError("cannot write problem file: " + path);
    out << serialize_problem(plant, exo);
}

ExtendedSystem build_extended(const SwitchingPlant& plant, const Exosystem& exo) {
    plant.validate();
    exo.validate();
    require(plant.num_modes() == exo.num_modes(),
            "build_extended: mode counts differ");
    require(plant.output_dim() == exo.output_dim(),
            "build_extended: plant has " + std::to_string(plant.output_dim()) +
                " outputs, exosystem drives " + std::to_string(exo.output_dim()));
    const int n = plant.state_dim();
    const int q = exo.state_dim();
    const int m = plant.input_dim();
    const int p = plant.output_dim();

    ExtendedSystem sys;
    sys.plant_dim = n;
    sys.exo_dim = q;
    for (int i = 0; i < plant.num_modes(); ++i) {
        ExtendedMode md;
        md.Ae = Mat::Zero(n + q, n + q);
        md.Ae.topLeftCorner(n, n) = plant.modes[i].A;
        md.Ae.bottomRightCorner(q, q) = exo.modes[i].Ag;
        md.Be = Mat::Zero(n + q, m);
        md.Be.topRows(n) = plant.modes[i].B;
        md.Ce = Mat::Zero(p, n + q);
        md.Ce.leftCols(n) = plant.modes[i].C;
        md.Ce.rightCols(q) = -exo.modes[i].Eg;
        sys.modes.push_back(std::move(md));
    }
    return sys;
}

}  // namespace swreg
