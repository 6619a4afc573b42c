#include "kelvsim/io.hpp"

#include <charconv>
#include <fstream>
#include <sstream>

namespace kelvsim {

std::string format_double(double x) {
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof buf, x);
    return std::string(buf, res.ptr);
}

void write_text_file(const std::filesystem::path& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw ValidationError("cannot open for writing: " + path.string());
    out << text;
}

std::string read_text_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ValidationError("cannot open: " + path.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

namespace {

void append_row(std::string& out, const std::vector<double>& vals) {
    for (size_t i = 0; i < vals.size(); ++i) {
        if (i) out += ',';
        out += format_double(vals[i]);
    }
    out += '\n';
}

}  // namespace

void write_mode_trajectory_csv(const std::filesystem::path& path, const ModeTrajectory& traj) {
    std::string out = "t,k1,k2,k3,v1_re,v1_im,v2_re,v2_im,v3_re,v3_im,energy,defect,p_re,p_im\n";
    for (size_t i = 0; i < traj.size(); ++i) {
        append_row(out, {traj.t[i], traj.k[i][0], traj.k[i][1], traj.k[i][2],
                         traj.v[i][0].real(), traj.v[i][0].imag(), traj.v[i][1].real(),
                         traj.v[i][1].imag(), traj.v[i][2].real(), traj.v[i][2].imag(),
                         traj.energy[i], traj.defect[i], traj.pressure[i].real(),
                         traj.pressure[i].imag()});
    }
    write_text_file(path, out);
}

void write_gradient_csv(const std::filesystem::path& path, const EnsembleTrajectory& traj) {
    std::string out =
        "t,a11,a12,a13,a21,a22,a23,a31,a32,a33,trace,total_energy,max_defect,"
        "admissibility_defect\n";
    for (size_t i = 0; i < traj.n_samples(); ++i) {
        std::vector<double> row = {traj.t[i]};
        for (int j = 0; j < 9; ++j) row.push_back(traj.gradient[i].a[j]);
        row.push_back(traj.trace_gradient[i]);
        row.push_back(traj.total_energy[i]);
        row.push_back(traj.max_defect[i]);
        row.push_back(traj.admissibility_defect[i]);
        append_row(out, row);
    }
    write_text_file(path, out);
}

void write_ensemble_mode_csv(const std::filesystem::path& path, const EnsembleTrajectory& traj,
                             size_t mode_index) {
    std::string out = "t,k1,k2,k3,v1_re,v1_im,v2_re,v2_im,v3_re,v3_im,energy,defect\n";
    const auto& ks = traj.k.at(mode_index);
    const auto& vs = traj.v.at(mode_index);
    for (size_t i = 0; i < traj.n_samples(); ++i) {
        const KelvinMode m{ks[i], vs[i]};
        append_row(out, {traj.t[i], ks[i][0], ks[i][1], ks[i][2], vs[i][0].real(),
                         vs[i][0].imag(), vs[i][1].real(), vs[i][1].imag(), vs[i][2].real(),
                         vs[i][2].imag(), mode_energy(m), incompressibility_defect(m)});
    }
    write_text_file(path, out);
}

void write_scan_csv(const std::filesystem::path& path, const OrientationScan& scan) {
    std::string out = "theta,phi,growth_rate\n";
    for (int i = 0; i < scan.n_theta; ++i)
        for (int j = 0; j < scan.n_phi; ++j) {
            out += format_double(scan.theta[i]);
            out += ',';
            out += format_double(scan.phi[j]);
            out += ',';
            const double g = scan.at(i, j);
            out += std::isnan(g) ? "nan" : format_double(g);
            out += '\n';
        }
    write_text_file(path, out);
}

namespace {

json cvec_json(const CVec3& v) {
    return json{{"re", {v[0].real(), v[1].real(), v[2].real()}},
                {"im", {v[0].imag(), v[1].imag(), v[2].imag()}}};
}

}  // namespace

json scan_summary_json(const OrientationScan& scan, const std::string& base_flow) {
    json j;
    j["max_growth"] = scan.max_growth;
    if (scan.argmax_index >= 0) {
        const int i = scan.argmax_index / scan.n_phi;
        const int jj = scan.argmax_index % scan.n_phi;
        const double st = std::sin(scan.theta[i]);
        j["argmax_direction"] = {{"theta", scan.theta[i]},
                                 {"phi", scan.phi[jj]},
                                 {"unit_k", {st * std::cos(scan.phi[jj]),
                                             st * std::sin(scan.phi[jj]),
                                             std::cos(scan.theta[i])}}};
    }
    j["parameters"] = {{"base_flow", base_flow},
                       {"nu", scan.nu},
                       {"k_mag", scan.k_mag},
                       {"n_theta", scan.n_theta},
                       {"n_phi", scan.n_phi}};
    return j;
}

json monodromy_json(const MonodromyResult& r) {
    json mult = json::array();
    for (const Complex& lam : r.multipliers)
        mult.push_back({{"re", lam.real()}, {"im", lam.imag()}, {"abs", std::abs(lam)}});
    json mono = json::array();
    for (int i = 0; i < 3; ++i) {
        json row = json::array();
        for (int j = 0; j < 3; ++j)
            row.push_back({{"re", r.monodromy(i, j).real()}, {"im", r.monodromy(i, j).imag()}});
        mono.push_back(row);
    }
    return json{{"period", r.period},
                {"multipliers", mult},
                {"monodromy", mono},
                {"growth_rate", r.growth_rate}};
}

json convolution_report_json(const ConvolutionReport& r) {
    return json{{"exact_term", cvec_json(r.exact_term)},
                {"approx_term", cvec_json(r.approx_term)},
                {"relative_error", r.relative_error},
                {"separation_ratio", r.separation_ratio},
                {"quadrature_warning", r.quadrature_warning},
                {"quadrature_error_estimate", r.quadrature_error_estimate}};
}

json residual_report_json(const ResidualReport& r) {
    return json{{"stencil_delta", r.stencil_delta},
                {"time", r.time},
                {"residual_norm", r.residual_norm},
                {"reference_norm", r.reference_norm}};
}

json cross_scale_report_json(const CrossScaleReport& r) {
    return json{{"trajectory_deviation", r.trajectory_deviation},
                {"ball_deviation", r.ball_deviation},
                {"gradient_contribution", r.gradient_contribution},
                {"scale_ratio", r.scale_ratio}};
}

ModeEnsemble parse_ensemble_json(const json& doc, double tol) {
    if (!doc.is_object() || !doc.contains("modes"))
        throw ValidationError("ensemble json: expected an object with a 'modes' array");
    const bool ps = doc.value("point_symmetric", true);
    std::vector<KelvinMode> modes;
    for (const json& jm : doc.at("modes")) {
        const auto read3 = [&](const char* key, bool required) -> Vec3 {
            if (!jm.contains(key)) {
                if (required) throw ValidationError(std::string("ensemble json: mode missing '") + key + "'");
                return {0.0, 0.0, 0.0};
            }
            const json& arr = jm.at(key);
            if (!arr.is_array() || arr.size() != 3)
                throw ValidationError(std::string("ensemble json: '") + key + "' must be [x,y,z]");
            return {arr[0].get<double>(), arr[1].get<double>(), arr[2].get<double>()};
        };
        const Vec3 k = read3("k", true);
        const Vec3 vim = read3("v_im", true);
        const Vec3 vre = read3("v_re", false);
        CVec3 v;
        for (int i = 0; i < 3; ++i) v[i] = Complex(vre[i], vim[i]);
        modes.push_back(make_kelvin_mode(k, v, tol));
    }
    return make_ensemble(std::move(modes), ps, tol);
}

ModeEnsemble read_ensemble_json(const std::filesystem::path& path, double tol) {
    json doc;
    try {
        doc = json::parse(read_text_file(path));
    } catch (const json::parse_error& e) {
        throw ValidationError("ensemble json parse error in " + path.string() + ": " + e.what());
    }
    return parse_ensemble_json(doc, tol);
}

json ensemble_to_json(const ModeEnsemble& ensemble) {
    json modes = json::array();
    for (const KelvinMode& m : ensemble.modes) {
        modes.push_back({{"k", {m.k[0], m.k[1], m.k[2]}},
                         {"v_re", {m.v[0].real(), m.v[1].real(), m.v[2].real()}},
                         {"v_im", {m.v[0].imag(), m.v[1].imag(), m.v[2].imag()}}});
    }
    return json{{"point_symmetric", ensemble.point_symmetric}, {"modes", modes}};
}

}  // namespace kelvsim
