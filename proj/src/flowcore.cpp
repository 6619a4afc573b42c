#include "kelvsim/flowcore.hpp"

#include <charconv>
#include <cstdio>
#include <vector>

namespace kelvsim {

Mat3 base_flow_matrix(const BaseFlowSpec& spec, double tol) {
    Mat3 m{};
    switch (spec.kind) {
        case BaseFlowSpec::Kind::Rotation:
            m(0, 1) = -spec.p0;
            m(1, 0) = spec.p0;
            break;
        case BaseFlowSpec::Kind::PlaneStrain:
            m(0, 0) = spec.p0;
            m(1, 1) = -spec.p0;
            break;
        case BaseFlowSpec::Kind::Shear:
            m(0, 1) = spec.p0;
            break;
        case BaseFlowSpec::Kind::Elliptic:
            m(0, 1) = -spec.p0;
            m(1, 0) = spec.p1;
            break;
        case BaseFlowSpec::Kind::Custom: {
            m = spec.custom;
            const double tr = std::abs(trace(m));
            const double scale = frobenius_norm(m);
            if (tr > tol * std::max(scale, 1e-300))
                throw ValidationError("base flow: custom gradient is not trace-free (|tr| = " +
                                      std::to_string(tr) + ")");
            break;
        }
    }
    return m;
}

FlowDiagnostics validate_base_flow(const Mat3& A) {
    const Mat3 aa = matmul(A, A);
    return {std::abs(trace(A)), frobenius_norm(aa - transpose(aa))};
}

ModeAmplitude incompressible_projection(const WaveVector& k, const CVec3& w) {
    const double k2 = norm2(k);
    if (k2 == 0.0) throw ValidationError("incompressible_projection: |k| = 0");
    const Complex kw = dot(k, w);
    const Complex f = kw / k2;
    return {w[0] - k[0] * f, w[1] - k[1] * f, w[2] - k[2] * f};
}

ModeAmplitude incompressible_projection(const WaveVector& k, const Vec3& w) {
    return incompressible_projection(k, to_complex(w));
}

namespace {

std::vector<double> parse_reals(const std::string& text) {
    std::vector<double> vals;
    size_t pos = 0;
    while (pos <= text.size()) {
        size_t comma = text.find(',', pos);
        if (comma == std::string::npos) comma = text.size();
        const std::string tok = text.substr(pos, comma - pos);
        double v = 0.0;
        const auto [p, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), v);
        if (ec != std::errc{} || p != tok.data() + tok.size())
            throw ValidationError("cannot parse real number '" + tok + "'");
        vals.push_back(v);
        pos = comma + 1;
        if (comma == text.size()) break;
    }
    return vals;
}

}  // namespace

BaseFlowSpec parse_base_flow(const std::string& text) {
    const size_t colon = text.find(':');
    const std::string name = text.substr(0, colon);
    const std::string args = colon == std::string::npos ? "" : text.substr(colon + 1);
    const auto need = [&](size_t n) {
        auto v = parse_reals(args);
        if (v.size() != n)
            throw ValidationError("base flow '" + name + "' expects " + std::to_string(n) +
                                  " parameter(s), got '" + args + "'");
        return v;
    };
    if (name == "rotation") return BaseFlowSpec::rotation(need(1)[0]);
    if (name == "strain" || name == "plane-strain") return BaseFlowSpec::plane_strain(need(1)[0]);
    if (name == "shear") return BaseFlowSpec::shear(need(1)[0]);
    if (name == "elliptic") {
        auto v = need(2);
        return BaseFlowSpec::elliptic(v[0], v[1]);
    }
    if (name == "custom") {
        auto v = need(9);
        Mat3 m;
        for (int i = 0; i < 9; ++i) m.a[i] = v[i];
        return BaseFlowSpec::custom_matrix(m);
    }
    throw ValidationError("unknown base flow '" + name +
                          "' (expected rotation|strain|shear|elliptic|custom)");
}

std::string base_flow_to_string(const BaseFlowSpec& spec) {
    char buf[256];
    switch (spec.kind) {
        case BaseFlowSpec::Kind::Rotation:
            std::snprintf(buf, sizeof buf, "rotation:%.17g", spec.p0);
            break;
        case BaseFlowSpec::Kind::PlaneStrain:
            std::snprintf(buf, sizeof buf, "strain:%.17g", spec.p0);
            break;
        case BaseFlowSpec::Kind::Shear:
            std::snprintf(buf, sizeof buf, "shear:%.17g", spec.p0);
            break;
        case BaseFlowSpec::Kind::Elliptic:
            std::snprintf(buf, sizeof buf, "elliptic:%.17g,%.17g", spec.p0, spec.p1);
            break;
        case BaseFlowSpec::Kind::Custom: {
            std::string s = "custom:";
            for (int i = 0; i < 9; ++i) {
                std::snprintf(buf, sizeof buf, "%.17g", spec.custom.a[i]);
                s += buf;
                if (i != 8) s += ',';
            }
            return s;
        }
    }
    return buf;
}

}  // namespace kelvsim
