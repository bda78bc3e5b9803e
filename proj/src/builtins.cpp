#include "morseq/errors.hpp"
#include "morseq/morse_instance.hpp"

namespace morseq {

namespace {

CriticalPoint fixed_point(std::string id, int index, Stability stability, int sigma,
                          std::optional<int> grading = std::nullopt) {
    CriticalPoint p;
    p.id = id;
    p.index = index;
    p.locus = Locus::fixed;
    p.stability = stability;
    p.phi = id;
    p.sigma = sigma;
    p.grading = grading;
    return p;
}

TrajectoryRecord ambient(std::string id, std::string from, std::string to, int sign,
                         std::optional<int> depart, std::optional<int> arrive,
                         std::optional<std::string> axis = std::nullopt) {
    TrajectoryRecord t;
    t.id = id;
    t.from = from;
    t.to = to;
    t.carrier = Carrier::ambient;
    t.sign = sign;
    t.depart = depart;
    t.arrive = arrive;
    t.axis = axis;
    return t;
}

TrajectoryRecord fixed(std::string id, std::string from, std::string to, int sign,
                       std::optional<XiClass> xi, std::optional<int> depart = std::nullopt,
                       std::optional<int> arrive = std::nullopt,
                       std::optional<std::string> axis = std::nullopt) {
    TrajectoryRecord t;
    t.id = id;
    t.from = from;
    t.to = to;
    t.carrier = Carrier::fixed;
    t.sign = sign;
    t.xi = xi;
    t.depart = depart;
    t.arrive = arrive;
    t.axis = axis;
    return t;
}

// Trivial trajectory from a side generator down to its plain copy.
TrajectoryRecord trivial(std::string id, std::string at, int sign, int depart, std::string axis) {
    TrajectoryRecord t;
    t.id = id;
    t.from = at;
    t.to = at;
    t.carrier = Carrier::fixed;
    t.sign = sign;
    t.depart = depart;
    t.axis = axis;
    return t;
}

// Upright torus, reflection through the plane of the page. Two fixed circles:
// the outer one through a and d, the inner one through b and c. All side
// labels are measured against the front-pointing normal at each point.
MorseInstance make_torus() {
    MorseInstance inst;
    inst.name = "torus";
    inst.kind = InstanceKind::closed_equivariant;
    inst.points = {
        fixed_point("a", 2, Stability::unstable, -1),
        fixed_point("b", 1, Stability::stable, +1),
        fixed_point("c", 1, Stability::unstable, -1),
        fixed_point("d", 0, Stability::stable, +1),
    };
    inst.trajectories = {
        ambient("u+", "a", "b", +1, +1, +1),
        ambient("u-", "a", "b", -1, -1, -1),
        ambient("t+", "c", "d", +1, +1, +1),
        ambient("t-", "c", "d", -1, -1, -1),
        fixed("v", "b", "c", +1, XiClass::P),
        fixed("w", "b", "c", -1, XiClass::P),
        fixed("l", "a", "d", +1, std::nullopt),
        fixed("r", "a", "d", -1, std::nullopt),
    };
    return inst;
}

// Klein bottle with the same critical point pattern; the normal bundle of the
// inner circle is twisted, so one of the two b -> c arcs reverses orientation.
MorseInstance make_klein() {
    MorseInstance inst = make_torus();
    inst.name = "klein";
    for (auto& t : inst.trajectories)
        if (t.id == "w") t.xi = XiClass::R;
    return inst;
}

// Double of the interval: a circle with one unstable max and one stable min.
MorseInstance make_interval() {
    MorseInstance inst;
    inst.name = "interval";
    inst.kind = InstanceKind::boundary_double;
    inst.points = {
        fixed_point("top", 1, Stability::unstable, -1),
        fixed_point("bottom", 0, Stability::stable, +1),
    };
    inst.trajectories = {
        ambient("g+", "top", "bottom", +1, +1, +1),
        ambient("g-", "top", "bottom", -1, -1, -1),
    };
    return inst;
}

// Upright genus-two surface with two reflection axes: fb (front-back) and
// lr (left-right). c, d, e carry side generators; + on the lr axis is the
// left-hand side.
MorseInstance make_genus2() {
    MorseInstance inst;
    inst.name = "genus2";
    inst.kind = InstanceKind::generalized;
    inst.points = {
        fixed_point("a", 2, Stability::stable, +1, 2),
        fixed_point("b", 1, Stability::stable, +1, 1),
        fixed_point("c", 1, Stability::unstable, +1, 0),
        fixed_point("d", 1, Stability::unstable, +1, 0),
        fixed_point("e", 1, Stability::unstable, +1, 0),
        fixed_point("f", 0, Stability::stable, +1, 0),
    };
    inst.trajectories = {
        ambient("u", "a", "b", +1, std::nullopt, +1, "fb"),
        ambient("u'", "a", "b", -1, std::nullopt, -1, "fb"),
        fixed("v", "b", "c", +1, XiClass::P, std::nullopt, +1, "lr"),
        fixed("v'", "b", "c", -1, XiClass::P, std::nullopt, -1, "lr"),
        fixed("w", "c", "d", +1, XiClass::P, +1, +1, "fb"),
        fixed("w'", "c", "d", -1, XiClass::P, -1, -1, "fb"),
        fixed("x", "d", "e", +1, XiClass::P, +1, std::nullopt, "lr"),
        fixed("x'", "d", "e", -1, XiClass::P, -1, std::nullopt, "lr"),
        ambient("y", "e", "f", +1, +1, std::nullopt, "fb"),
        ambient("y'", "e", "f", -1, -1, std::nullopt, "fb"),
        trivial("tc+", "c", -1, +1, "fb"),
        trivial("tc-", "c", +1, -1, "fb"),
        trivial("td_l", "d", -1, +1, "lr"),
        trivial("td_r", "d", +1, -1, "lr"),
        trivial("te+", "e", -1, +1, "fb"),
        trivial("te-", "e", +1, -1, "fb"),
    };
    return inst;
}

}  // namespace

std::vector<std::string> builtin_names() { return {"torus", "klein", "interval", "genus2"}; }

MorseInstance builtin_instance(const std::string& name) {
    if (name == "torus") return make_torus();
    if (name == "klein") return make_klein();
    if (name == "interval") return make_interval();
    if (name == "genus2") return make_genus2();
    throw UnknownName("no builtin instance named '" + name + "'");
}

}  // namespace morseq
