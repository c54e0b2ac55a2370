//! Bundled scenarios.

/// `(name, scenario text)` for every bundled fixture.
pub const FIXTURES: &[(&str, &str)] = &[
    ("FIX-EUCL", EUCL),
    ("FIX-QUAD", QUAD),
    ("FIX-EXP", EXP),
    ("FIX-QUART", QUART),
    ("FIX-SO3", SO3),
    ("FIX-ACT", ACT),
    ("FIX-CONN", CONN),
    ("FIX-CONN-NEG", CONN_NEG),
    ("FIX-WARP", WARP),
];

pub fn fixture(name: &str) -> Option<&'static str> {
    FIXTURES.iter().find(|(n, _)| n.eq_ignore_ascii_case(name)).map(|(_, t)| *t)
}

const EUCL: &str = r#"# Euclidean kinetic energy on TR^2, flat connection, geodesic semispray.
[scenario]
name = "FIX-EUCL"
mode = "classical"
m = 2
r = 2

[lagrangian]
L = "(y1^2 + y2^2)/2"

[hamiltonian]
H = "(p1^2 + p2^2)/2"

[connection]

[dlinear]

[mechanics]
G.1 = "0"
G.2 = "0"

[sampling]
count = 200
seed = 1
x = [-1, 1]
y = [-2, 2]
p = [-2, 2]
"#;

const QUAD: &str = r#"# L = y g y / 2 with g = [[2,1],[1,2]]. The dual semispray is K*_b = K^a g_ab
# at y = g^-1 p, and the dual morphism is g^-1, which makes theta_L and theta_H correspond.
[scenario]
name = "FIX-QUAD"
mode = "classical"
m = 2
r = 2

[lagrangian]
L = "y1^2 + y1*y2 + y2^2"

[hamiltonian]
H = "(p1^2 - p1*p2 + p2^2)/3"

[mechanics]
G.1 = "y1*y2"
G.2 = "y1^2"
F.1 = "4*y2"

[dual_mechanics]
G.1 = "2*(((2*p1 - p2)/3)*((2*p2 - p1)/3) - (2*p2 - p1)/3) + ((2*p1 - p2)/3)^2"
G.2 = "(((2*p1 - p2)/3)*((2*p2 - p1)/3) - (2*p2 - p1)/3) + 2*((2*p1 - p2)/3)^2"
g.1.1 = "2/3"
g.1.2 = "-1/3"
g.2.1 = "-1/3"
g.2.2 = "2/3"

[sampling]
count = 200
seed = 2
x = [-1, 1]
y = [-2, 2]
p = [-2, 2]
"#;

const EXP: &str = r#"# L = exp(y), conjugate H = p log p - p on p > 0.
[scenario]
name = "FIX-EXP"
mode = "classical"
m = 1
r = 1
ids = ["ID-2.4", "ID-2.5", "ID-3.6", "ID-3.7", "ID-4.8", "ID-4.9", "ID-4.10", "ID-4.11",
       "ID-4.12", "ID-4.13", "ID-4.14", "ID-4.15", "ID-5.4", "ID-5.5"]

[lagrangian]
L = "exp(y1)"

[hamiltonian]
H = "p1*log(p1) - p1"

[sampling]
count = 200
seed = 3
x = [-1, 1]
y = [-1.5, 1.5]
p = [0.25, 4]
"#;

const QUART: &str = r#"# L = y^4/4 + y^2/2, H has no closed form.
[scenario]
name = "FIX-QUART"
mode = "classical"
m = 1
r = 1
ids = ["ID-2.4", "ID-2.5", "ID-3.6", "ID-3.7", "ID-4.8", "ID-4.9", "ID-4.10", "ID-4.11",
       "ID-4.12", "ID-4.13", "ID-4.14", "ID-4.15", "ID-5.4", "ID-5.5"]

[lagrangian]
L = "y1^4/4 + y1^2/2"

[sampling]
count = 200
seed = 4
x = [-1, 1]
y = [-3, 3]
p = [-3, 3]
"#;

const SO3: &str = r#"# so(3) as an algebroid over a line: zero anchor, structure constants epsilon.
[scenario]
name = "FIX-SO3"
mode = "general"
m = 1
p = 3
r = 1

[algebroid]
Lstruct.3.1.2 = "1"
Lstruct.3.2.1 = "-1"
Lstruct.1.2.3 = "1"
Lstruct.1.3.2 = "-1"
Lstruct.2.3.1 = "1"
Lstruct.2.1.3 = "-1"

[lagrangian]
L = "y1^2/2"

[sampling]
count = 100
seed = 5
"#;

const ACT: &str = r#"# Action algebroid with anchor columns d/dx1 and x1 d/dx1 + d/dx2, [e1, e2] = e1.
[scenario]
name = "FIX-ACT"
mode = "general"
m = 2
p = 2
r = 2

[algebroid]
rho.1.1 = "1"
rho.1.2 = "chi1"
rho.2.2 = "1"
Lstruct.1.1.2 = "1"
Lstruct.1.2.1 = "-1"

[lagrangian]
L = "y1^2 + y1*y2 + y2^2"

[hamiltonian]
H = "(p1^2 - p1*p2 + p2^2)/3"

[dual_mechanics]
g.1.1 = "2/3"
g.1.2 = "-1/3"
g.2.1 = "-1/3"
g.2.2 = "2/3"

[sampling]
count = 100
seed = 6
x = [-1, 1]
y = [-2, 2]
p = [-2, 2]
"#;

const CONN: &str = r#"# FIX-QUAD with the nonlinear connection Gamma^1_2 = x1 y2 and a distinguished
# linear connection on E; both dual objects are derived.
[scenario]
name = "FIX-CONN"
mode = "classical"
m = 2
r = 2

[lagrangian]
L = "y1^2 + y1*y2 + y2^2"

[connection]
Gamma.1.2 = "x1*y2"

[dlinear]
Hc.1.1.2 = "x2"
Hc.2.2.1 = "0.5"
Hv.1.2.1 = "y1"
Hv.2.2.2 = "x1"
Vc.1.2.1 = "0.3"
Vv.1.1.2 = "y2"
Vv.2.1.1 = "0.2"

[dual_mechanics]
g.1.1 = "2/3"
g.1.2 = "-1/3"
g.2.1 = "-1/3"
g.2.2 = "2/3"

[sampling]
count = 200
seed = 7
x = [-1, 1]
y = [-2, 2]
p = [-2, 2]
"#;

const CONN_NEG: &str = r#"# Negative control: FIX-CONN with the exact dual connection shifted by 0.1.
[scenario]
name = "FIX-CONN-NEG"
mode = "classical"
m = 2
r = 2

[lagrangian]
L = "y1^2 + y1*y2 + y2^2"

[connection]
Gamma.1.2 = "x1*y2"

[dual_connection]
Gamma.1.1 = "0.1"
Gamma.2.1 = "0.1"
Gamma.1.2 = "-2*x1*(2*p2 - p1)/3 + 0.1"
Gamma.2.2 = "-x1*(2*p2 - p1)/3 + 0.1"

[mechanics]
G.1 = "y1*y2"
G.2 = "y1^2"

[dual_mechanics]
g.1.1 = "2/3"
g.1.2 = "-1/3"
g.2.1 = "-1/3"
g.2.2 = "2/3"

[sampling]
count = 200
seed = 8
x = [-1, 1]
y = [-2, 2]
p = [-2, 2]
"#;

const WARP: &str = r#"# Base-dependent fiber Hessian. The dual morphism is the inverse Hessian written over chi.
[scenario]
name = "FIX-WARP"
mode = "classical"
m = 2
r = 2

[lagrangian]
L = "(1 + x1^2)*y1^2/2 + y2^2/2 + x2*y1*y2/4"

[connection]
Gamma.1.2 = "x1*y2"
Gamma.2.1 = "y1/2"

[dlinear]
Hc.1.1.2 = "x2"
Hv.1.2.1 = "y1"
Vc.1.2.1 = "0.3"
Vv.2.1.1 = "0.2"

[mechanics]
G.1 = "y1*y2 + x2"
G.2 = "y1^2"
F.1 = "x1"

[dual_mechanics]
g.1.1 = "1/((1 + chi1^2) - chi2^2/16)"
g.1.2 = "-(chi2/4)/((1 + chi1^2) - chi2^2/16)"
g.2.1 = "-(chi2/4)/((1 + chi1^2) - chi2^2/16)"
g.2.2 = "(1 + chi1^2)/((1 + chi1^2) - chi2^2/16)"

[sampling]
count = 100
seed = 9
x = [-1, 1]
y = [-1.5, 1.5]
p = [-1.5, 1.5]
"#;
