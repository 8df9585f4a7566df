//! Embedded small-benchmark catalog (polynomial approximations,
//! physics kernels, and summation chains over declared input boxes).

pub const DQMOM: &str = "
INPUTS {
  m0 fl64 : (-1.0, 1.0); m1 fl64 : (-1.0, 1.0); m2 fl64 : (-1.0, 1.0);
  w0 fl64 : (0.00001, 1.0); w1 fl64 : (0.00001, 1.0); w2 fl64 : (0.00001, 1.0);
  a0 fl64 : (0.00001, 1.0); a1 fl64 : (0.00001, 1.0); a2 fl64 : (0.00001, 1.0);
}
OUTPUTS { r; }
EXPRS {
  r = 0.0 + ((((w2 * (0.0 - m2)) * (-3.0 * ((1.0 * (a2/w2)) * (a2/w2)))) * 1.0)
    + ((((w1 * (0.0 - m1)) * (-3.0 * ((1.0 * (a1/w1)) * (a1/w1)))) * 1.0)
    + ((((w0 * (0.0 - m0)) * (-3.0 * ((1.0 * (a0/w0)) * (a0/w0)))) * 1.0) + 0.0)));
}
";

pub const KEPLER0: &str = "
INPUTS {
  x1 fl64 : (4.0, 6.36); x2 fl64 : (4.0, 6.36); x3 fl64 : (4.0, 6.36);
  x4 fl64 : (4.0, 6.36); x5 fl64 : (4.0, 6.36); x6 fl64 : (4.0, 6.36);
}
OUTPUTS { r; }
EXPRS {
  r = x2*x5 + x3*x6 - x2*x3 - x5*x6 + x1*(-x1 + x2 + x3 - x4 + x5 + x6);
}
";

pub const KEPLER1: &str = "
INPUTS {
  x1 fl64 : (4.0, 6.36); x2 fl64 : (4.0, 6.36);
  x3 fl64 : (4.0, 6.36); x4 fl64 : (4.0, 6.36);
}
OUTPUTS { r; }
EXPRS {
  r = x1*x4*(-x1 + x2 + x3 - x4) + x2*(x1 - x2 + x3 + x4)
    + x3*(x1 + x2 - x3 + x4) - x2*x3*x4 - x1*x3 - x1*x2 - x4;
}
";

pub const KEPLER2: &str = "
INPUTS {
  x1 fl64 : (4.0, 6.36); x2 fl64 : (4.0, 6.36); x3 fl64 : (4.0, 6.36);
  x4 fl64 : (4.0, 6.36); x5 fl64 : (4.0, 6.36); x6 fl64 : (4.0, 6.36);
}
OUTPUTS { r; }
EXPRS {
  r = x1*x4*(-x1 + x2 + x3 - x4 + x5 + x6) + x2*x5*(x1 - x2 + x3 + x4 - x5 + x6)
    + x3*x6*(x1 + x2 - x3 + x4 + x5 - x6) - x2*x3*x4 - x1*x3*x5 - x1*x2*x6 - x4*x5*x6;
}
";

pub const JET_ENGINE: &str = "
INPUTS { x1 fl64 : (-5.0, 5.0); x2 fl64 : (-20.0, 5.0); }
OUTPUTS { r; }
EXPRS {
  t = (3.0*x1*x1 + 2.0*x2 - x1);
  d = x1*x1 + 1.0;
  s = t/d;
  r = x1 + ((2.0*x1*s*(s - 3.0) + x1*x1*(4.0*s - 6.0))*d
      + 3.0*x1*x1*s + x1*x1*x1 + x1 + 3.0*s);
}
";

pub const TURBINE1: &str = "
INPUTS { v fl64 : (-4.5, -0.3); w fl64 : (0.4, 0.9); r fl64 : (3.8, 7.8); }
OUTPUTS { out; }
EXPRS {
  out = 3.0 + 2.0/(r*r) - 0.125*(3.0 - 2.0*v)*(w*w*r*r)/(1.0 - v) - 4.5;
}
";

pub const TURBINE2: &str = "
INPUTS { v fl64 : (-4.5, -0.3); w fl64 : (0.4, 0.9); r fl64 : (3.8, 7.8); }
OUTPUTS { out; }
EXPRS {
  out = 6.0*v - 0.5*v*(w*w*r*r)/(1.0 - v) - 2.5;
}
";

pub const TURBINE3: &str = "
INPUTS { v fl64 : (-4.5, -0.3); w fl64 : (0.4, 0.9); r fl64 : (3.8, 7.8); }
OUTPUTS { out; }
EXPRS {
  out = 3.0 - 2.0/(r*r) - 0.125*(1.0 + 2.0*v)*(w*w*r*r)/(1.0 - v) - 0.5;
}
";

pub const VERHULST: &str = "
INPUTS { x fl64 : (0.1, 0.3); }
OUTPUTS { out; }
EXPRS { out = (4.0*x)/(1.0 + (x/1.11)); }
";

pub const PREDATOR_PREY: &str = "
INPUTS { x fl64 : (0.1, 0.3); }
OUTPUTS { out; }
EXPRS { out = (4.0*x*x)/(1.0 + (x/1.11)*(x/1.11)); }
";

pub const CARBON_GAS: &str = "
INPUTS { v fl64 : (0.1, 0.5); }
OUTPUTS { out; }
EXPRS {
  out = (3.5e7 + 0.401*(1000.0/v)*(1000.0/v))*(v - 1000.0*4.27e-05)
      - 1.3806503e-23*1000.0*300.0;
}
";

pub const DOPPLER1: &str = "
INPUTS { u fl64 : (-100.0, 100.0); v fl64 : (20.0, 20000.0); t fl64 : (-30.0, 50.0); }
OUTPUTS { out; }
EXPRS {
  t1 = 331.4 + 0.6*t;
  out = (-t1*v)/((t1 + u)*(t1 + u));
}
";

pub const DOPPLER2: &str = "
INPUTS { u fl64 : (-125.0, 125.0); v fl64 : (15.0, 25000.0); t fl64 : (-40.0, 60.0); }
OUTPUTS { out; }
EXPRS {
  t1 = 331.4 + 0.6*t;
  out = (-t1*v)/((t1 + u)*(t1 + u));
}
";

pub const DOPPLER3: &str = "
INPUTS { u fl64 : (-30.0, 120.0); v fl64 : (320.0, 20300.0); t fl64 : (-50.0, 30.0); }
OUTPUTS { out; }
EXPRS {
  t1 = 331.4 + 0.6*t;
  out = (-t1*v)/((t1 + u)*(t1 + u));
}
";

pub const RIGID_BODY1: &str = "
INPUTS { x1 fl64 : (-15.0, 15.0); x2 fl64 : (-15.0, 15.0); x3 fl64 : (-15.0, 15.0); }
OUTPUTS { out; }
EXPRS { out = -x1*x2 - 2.0*x2*x3 - x1 - x3; }
";

pub const RIGID_BODY2: &str = "
INPUTS { x1 fl64 : (-15.0, 15.0); x2 fl64 : (-15.0, 15.0); x3 fl64 : (-15.0, 15.0); }
OUTPUTS { out; }
EXPRS {
  out = 2.0*x1*x2*x3 + 3.0*x3*x3 - x2*x1*x2*x3 + 3.0*x3*x3 - x2;
}
";

pub const SQROOT: &str = "
INPUTS { x fl64 : (0.0, 1.0); }
OUTPUTS { out; }
EXPRS {
  out = 1.0 + 0.5*x - 0.125*x*x + 0.0625*x*x*x - 0.0390625*x*x*x*x;
}
";

pub const SINE: &str = "
INPUTS { x fl64 : (-1.57079632679, 1.57079632679); }
OUTPUTS { out; }
EXPRS {
  out = x - x*x*x/6.0 + x*x*x*x*x/120.0 - x*x*x*x*x*x*x/5040.0;
}
";

pub const SINE_ORDER3: &str = "
INPUTS { x fl64 : (-2.0, 2.0); }
OUTPUTS { out; }
EXPRS { out = 0.954929658551372*x - 0.12900613773279798*(x*x*x); }
";

pub const SPHERE: &str = "
INPUTS {
  x fl64 : (-10.0, 10.0); r fl64 : (0.0, 10.0);
  lat fl64 : (-1.570796, 1.570796); lon fl64 : (-3.14159265, 3.14159265);
}
OUTPUTS { out; }
EXPRS { out = x + r*sin(lat)*cos(lon); }
";

pub const SUM: &str = "
INPUTS { x0 fl64 : (1.0, 2.0); x1 fl64 : (1.0, 2.0); x2 fl64 : (1.0, 2.0); }
OUTPUTS { out; }
EXPRS {
  p0 = (x0 + x1) - x2;
  p1 = (x1 + x2) - x0;
  p2 = (x2 + x0) - x1;
  out = (p0 + p1) + p2;
}
";

pub const TEST01_SUM3: &str = "
INPUTS { x0 fl32 : (1.0, 2.0); x1 fl32 : (1.0, 2.0); x2 fl32 : (1.0, 2.0); }
OUTPUTS { out; }
EXPRS {
  p0 rnd32 = (x0 + x1) - x2;
  p1 rnd32 = (x1 + x2) - x0;
  p2 rnd32 = (x2 + x0) - x1;
  out rnd32 = (p0 + p1) + p2;
}
";

pub const TEST02_SUM8: &str = "
INPUTS {
  x0 fl64 : (1.0, 2.0); x1 fl64 : (1.0, 2.0); x2 fl64 : (1.0, 2.0); x3 fl64 : (1.0, 2.0);
  x4 fl64 : (1.0, 2.0); x5 fl64 : (1.0, 2.0); x6 fl64 : (1.0, 2.0); x7 fl64 : (1.0, 2.0);
}
OUTPUTS { out; }
EXPRS { out = x0 + x1 + x2 + x3 + x4 + x5 + x6 + x7; }
";

pub const SQRT_ADD: &str = "
INPUTS { x fl64 : (1.0, 1000.0); }
OUTPUTS { out; }
EXPRS { out = 1.0/(sqrt(x + 1.0) + sqrt(x)); }
";

pub const HYPOT: &str = "
INPUTS { x1 fl64 : (1.0, 100.0); x2 fl64 : (1.0, 100.0); }
OUTPUTS { out; }
EXPRS { out = sqrt(x1*x1 + x2*x2); }
";

pub const HYPOT32: &str = "
INPUTS { x1 fl32 : (1.0, 100.0); x2 fl32 : (1.0, 100.0); }
OUTPUTS { out; }
EXPRS { out rnd32 = sqrt(x1*x1 + x2*x2); }
";

pub const X_BY_XY: &str = "
INPUTS { x fl64 : (1.0, 4.0); y fl64 : (1.0, 4.0); }
OUTPUTS { out; }
EXPRS { out = x/(x + y); }
";

pub const LOGEXP: &str = "
INPUTS { x fl64 : (-8.0, 8.0); }
OUTPUTS { out; }
EXPRS { out = log(1.0 + exp(x)); }
";

pub const EXP1X: &str = "
INPUTS { x fl64 : (0.01, 0.5); }
OUTPUTS { out; }
EXPRS { out = (exp(x) - 1.0)/x; }
";

pub const EXP1X_32: &str = "
INPUTS { x fl32 : (0.01, 0.5); }
OUTPUTS { out; }
EXPRS { out rnd32 = (exp(x) - 1.0)/x; }
";

pub const NONLIN1: &str = "
INPUTS { t fl64 : (0.0, 999.0); }
OUTPUTS { out; }
EXPRS { out = t/(t + 1.0); }
";

pub const NONLIN2: &str = "
INPUTS { x fl64 : (1.001, 2.0); y fl64 : (1.001, 2.0); }
OUTPUTS { out; }
EXPRS { out = (x*y - 1.0)/((x*y)*(x*y) - 1.0); }
";

pub const I4: &str = "
INPUTS { x fl32 : (0.1, 10.0); y fl32 : (0.0, 5.0); }
OUTPUTS { out; }
EXPRS { out rnd32 = sqrt(x + y*y); }
";

pub const HIMMILBEAU: &str = "
INPUTS { x1 fl64 : (-5.0, 5.0); x2 fl64 : (-5.0, 5.0); }
OUTPUTS { out; }
EXPRS {
  a = x1*x1 + x2 - 11.0;
  b = x1 + x2*x2 - 7.0;
  out = a*a + b*b;
}
";

pub const BSPLINE3: &str = "
INPUTS { u fl64 : (0.0, 1.0); }
OUTPUTS { out; }
EXPRS { out = -(u*u*u)/6.0; }
";

pub const CATALOG: &[(&str, &str)] = &[
    ("dqmom", DQMOM),
    ("kepler0", KEPLER0),
    ("kepler1", KEPLER1),
    ("kepler2", KEPLER2),
    ("jetEngine", JET_ENGINE),
    ("turbine1", TURBINE1),
    ("turbine2", TURBINE2),
    ("turbine3", TURBINE3),
    ("verhulst", VERHULST),
    ("predatorPrey", PREDATOR_PREY),
    ("carbonGas", CARBON_GAS),
    ("doppler1", DOPPLER1),
    ("doppler2", DOPPLER2),
    ("doppler3", DOPPLER3),
    ("rigidBody1", RIGID_BODY1),
    ("rigidBody2", RIGID_BODY2),
    ("sqroot", SQROOT),
    ("sine", SINE),
    ("sineOrder3", SINE_ORDER3),
    ("sphere", SPHERE),
    ("sum", SUM),
    ("test01_sum3", TEST01_SUM3),
    ("test02_sum8", TEST02_SUM8),
    ("sqrt_add", SQRT_ADD),
    ("hypot", HYPOT),
    ("hypot32", HYPOT32),
    ("x_by_xy", X_BY_XY),
    ("logexp", LOGEXP),
    ("exp1x", EXP1X),
    ("exp1x_32", EXP1X_32),
    ("nonlin1", NONLIN1),
    ("nonlin2", NONLIN2),
    ("i4", I4),
    ("himmilbeau", HIMMILBEAU),
    ("bspline3", BSPLINE3),
];
