#include "slq/boundary.hpp"

#include <cmath>
#include <numbers>

#include <nlohmann/json.hpp>

#include "slq/errors.hpp"

namespace slq {

namespace {

constexpr double kPi = std::numbers::pi;

double reduce_angle(double phi, const char* name, std::vector<std::string>* warnings) {
    if (phi >= 0.0 && phi < kPi) return phi;
    double red = std::fmod(phi, kPi);
    if (red < 0) red += kPi;
    if (warnings)
        warnings->push_back(std::string(name) + " = " + std::to_string(phi) +
                            " reduced mod pi to " + std::to_string(red));
    return red;
}

} // namespace

BoundaryCondition make_separated(double phi_a, double phi_b,
                                 std::vector<std::string>* warnings) {
    return SeparatedBC{reduce_angle(phi_a, "phi_a", warnings),
                       reduce_angle(phi_b, "phi_b", warnings)};
}

BoundaryCondition make_coupled(double phi, Mat2d R, std::vector<std::string>* warnings) {
    if (std::abs(R.det() - 1.0) > 1e-12)
        fail_pre("NotUnimodular", "coupled boundary matrix must have det R = 1 (got det = " +
                                      std::to_string(R.det()) + ")");
    return CoupledBC{reduce_angle(phi, "phi", warnings), R};
}

BoundaryCondition bc_from_json(std::string_view text, std::vector<std::string>* warnings) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::exception& e) {
        fail_pre("BadBoundaryCondition", std::string("JSON parse failure: ") + e.what());
    }
    try {
        const std::string type = j.at("type").get<std::string>();
        if (type == "separated")
            return make_separated(j.at("phi_a").get<double>(), j.at("phi_b").get<double>(),
                                  warnings);
        if (type == "coupled") {
            const auto& rj = j.at("R");
            if (!rj.is_array() || rj.size() != 2 || rj[0].size() != 2 || rj[1].size() != 2)
                fail_pre("BadBoundaryCondition", "'R' must be a 2x2 matrix");
            Mat2d R{rj[0][0].get<double>(), rj[0][1].get<double>(), rj[1][0].get<double>(),
                    rj[1][1].get<double>()};
            return make_coupled(j.at("phi").get<double>(), R, warnings);
        }
        fail_pre("BadBoundaryCondition", "'type' must be 'separated' or 'coupled'");
    } catch (const nlohmann::json::exception& e) {
        fail_pre("BadBoundaryCondition", std::string("malformed: ") + e.what());
    }
}

std::string bc_to_json(const BoundaryCondition& bc) {
    nlohmann::json j;
    if (const auto* s = std::get_if<SeparatedBC>(&bc)) {
        j["type"] = "separated";
        j["phi_a"] = s->phi_a;
        j["phi_b"] = s->phi_b;
    } else {
        const auto& c = std::get<CoupledBC>(bc);
        j["type"] = "coupled";
        j["phi"] = c.phi;
        j["R"] = {{c.R.a11, c.R.a12}, {c.R.a21, c.R.a22}};
    }
    return j.dump();
}

std::array<Complex, 2> bc_residual(const BoundaryCondition& bc, const QuasiState& at_a,
                                   const QuasiState& at_b) {
    if (const auto* s = std::get_if<SeparatedBC>(&bc)) {
        return {at_a.u * std::cos(s->phi_a) - at_a.u1 * std::sin(s->phi_a),
                at_b.u * std::cos(s->phi_b) - at_b.u1 * std::sin(s->phi_b)};
    }
    const auto& c = std::get<CoupledBC>(bc);
    const Complex rot = std::polar(1.0, c.phi);
    return {at_b.u - rot * (c.R.a11 * at_a.u + c.R.a12 * at_a.u1),
            at_b.u1 - rot * (c.R.a21 * at_a.u + c.R.a22 * at_a.u1)};
}

MatrixPairBC validate_matrix_pair(const Mat2c& Ba, const Mat2c& Bb) {
    // rank(Ba | Bb) = 2: the 2x4 block has two independent rows, i.e. some
    // 2x2 minor is nonsingular. Scale-aware via the largest row norm.
    const double scale =
        std::max({std::abs(Ba.a11), std::abs(Ba.a12), std::abs(Ba.a21), std::abs(Ba.a22),
                  std::abs(Bb.a11), std::abs(Bb.a12), std::abs(Bb.a21), std::abs(Bb.a22), 1.0});
    const Complex cols[4][2] = {{Ba.a11, Ba.a21}, {Ba.a12, Ba.a22}, {Bb.a11, Bb.a21},
                                {Bb.a12, Bb.a22}};
    double best_minor = 0.0;
    for (int i = 0; i < 4; ++i)
        for (int j = i + 1; j < 4; ++j)
            best_minor = std::max(best_minor,
                                  std::abs(cols[i][0] * cols[j][1] - cols[i][1] * cols[j][0]));
    if (best_minor <= 1e-12 * scale * scale)
        fail_pre("RankDeficient", "rank(B_a | B_b) < 2");

    const Mat2c J{Complex(0), Complex(-1), Complex(1), Complex(0)};
    auto conj_t = [](const Mat2c& m) {
        return Mat2c{std::conj(m.a11), std::conj(m.a21), std::conj(m.a12), std::conj(m.a22)};
    };
    const Mat2c lhs = Ba * J * conj_t(Ba);
    const Mat2c rhs = Bb * J * conj_t(Bb);
    const double resid = frobenius_norm(lhs - rhs);
    if (resid > 1e-12 * scale * scale)
        fail_pre("NotSelfAdjoint", "B_a J B_a* - B_b J B_b* has norm " + std::to_string(resid));
    return MatrixPairBC{Ba, Bb};
}

double coupled_discriminant(const Problem& pr, const CoupledBC& bc, double lambda,
                            IvpOptions opts) {
    const TransferMatrix T = transfer_matrix(pr, Complex(lambda, 0.0), opts);
    const Mat2c adjR = to_complex(bc.R.adjugate());
    const Complex tr = (adjR * T.m).trace();
    return tr.real() - 2.0 * std::cos(bc.phi);
}

bool is_real_coupling(const BoundaryCondition& bc) {
    if (std::holds_alternative<SeparatedBC>(bc)) return true;
    return std::get<CoupledBC>(bc).phi == 0.0;
}

} // namespace slq
