#include "cutfem/quadrature.hpp"

namespace cutfem::quadrature {

namespace {

std::vector<TetPoint> make_tet_degree5() {
    std::vector<TetPoint> pts;
    const auto add_orbit4 = [&](double a, double w) {
        const double b = 1.0 - 3.0 * a;
        pts.push_back({{b, a, a, a}, w});
        pts.push_back({{a, b, a, a}, w});
        pts.push_back({{a, a, b, a}, w});
        pts.push_back({{a, a, a, b}, w});
    };
    add_orbit4(0.0927352503108912264, 0.0734930431163619496);
    add_orbit4(0.3108859192633006097, 0.1126879257180158508);
    const double c = 0.4544962958743503744;
    const double d = 0.5 - c;
    const double w = 0.0425460207770814664;
    pts.push_back({{c, c, d, d}, w});
    pts.push_back({{c, d, c, d}, w});
    pts.push_back({{c, d, d, c}, w});
    pts.push_back({{d, c, c, d}, w});
    pts.push_back({{d, c, d, c}, w});
    pts.push_back({{d, d, c, c}, w});
    return pts;
}

std::vector<TriPoint> make_tri_degree4() {
    std::vector<TriPoint> pts;
    const auto add_orbit3 = [&](double a, double w) {
        const double b = 1.0 - 2.0 * a;
        pts.push_back({{b, a, a}, w});
        pts.push_back({{a, b, a}, w});
        pts.push_back({{a, a, b}, w});
    };
    add_orbit3(0.445948490915965, 0.223381589678011);
    add_orbit3(0.091576213509771, 0.109951743655322);
    return pts;
}

}  // namespace

std::span<const TetPoint> tet_degree5() {
    static const std::vector<TetPoint> rule = make_tet_degree5();
    return rule;
}

std::span<const TriPoint> tri_degree2() {
    static const std::vector<TriPoint> rule = {
        {{0.5, 0.5, 0.0}, 1.0 / 3.0},
        {{0.0, 0.5, 0.5}, 1.0 / 3.0},
        {{0.5, 0.0, 0.5}, 1.0 / 3.0},
    };
    return rule;
}

std::span<const TriPoint> tri_degree4() {
    static const std::vector<TriPoint> rule = make_tri_degree4();
    return rule;
}

}  // namespace cutfem::quadrature
