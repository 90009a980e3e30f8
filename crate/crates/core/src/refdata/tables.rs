//! Embedded reference tables. Printed values are kept as the strings that appear in the
//! source tables; exact entries (`2/7`, `8/5`) are stored as expressions.

/// `(κ, label, printed, closed form)`.
pub(crate) type Row = (u32, &'static str, &'static str, Option<&'static str>);

pub(crate) const E2_KAPPA4: &str = "(2 + sqrt(2) + sqrt(2 + 4*sqrt(2)))/4";
pub(crate) const E3_KAPPA4: &str = "28/65 + 2/(65*t) + 1/2*sqrt(4256/12675 + 368/(195*s) - 16/195*s + 121088*t/4225); \
t = sqrt(3/(133 - 1495/s + 65*s)); s = (629 + 48*sqrt(177))^(1/3)";
pub(crate) const E5_KAPPA4: &str = "16/1275*(42 + w/3^(2/3) - 32533/(w*3^(1/3))); w = (13025367 + 208250*sqrt(6294))^(1/3)";

pub(crate) const TABLE1: &[Row] = &[
    (2, "E_0", "1", Some("1")),
    (2, "E_1", "2/3", Some("2/3")),
    (2, "E_2", "1/2", Some("1/2")),
    (2, "E_3", "2/5", Some("2/5")),
    (2, "E_4", "1/3", Some("1/3")),
    (2, "E_5", "2/7", Some("2/7")),
    (3, "E_0", "3/2", Some("3/2")),
    (3, "E_1", "1.320", Some("(5 + 3*sqrt(2))/7")),
    (3, "E_2", "1.228", Some("(9 + sqrt(33))/12")),
    (3, "E_3", "1.173", None),
    (3, "E_4", "1.137", None),
    (3, "E_5", "1.112", None),
    (4, "E_0", "1.707", Some("1 + 1/sqrt(2)")),
    (4, "E_1", "8/5", Some("8/5")),
    (4, "E_2", "1.545", Some(E2_KAPPA4)),
    (4, "E_3", "1.512", Some(E3_KAPPA4)),
    (4, "E_4", "1.491", None),
    (4, "E_5", "1.476", Some(E5_KAPPA4)),
];

/// `(name, printed, closed form)`; an empty printed string means only the closed form
/// is given.
pub(crate) type AuxRow = (&'static str, &'static str, Option<&'static str>);

/// `(Ansatz, E printed, E closed form, aux)`; `None` marks an Ansatz with no listed
/// solution.
pub(crate) type AnsatzRow = (&'static str, Option<(&'static str, &'static str, &'static [AuxRow])>);

pub(crate) const TABLE2: &[AnsatzRow] = &[
    ("(1)", Some(("0.853", "1/2 + 1/(2*sqrt(2))", &[("Y_1", "", Some("sqrt(2)/2"))]))),
    ("(1)", Some(("1.545", E2_KAPPA4, &[("Y_1", "", Some("sqrt(2)/2"))]))),
    ("(1)", Some(("0.161", "(2 + sqrt(2) - sqrt(2 + 4*sqrt(2)))/4", &[("Y_1", "", Some("sqrt(2)/2"))]))),
    ("(1)", Some(("0.146", "1/2 - 1/(2*sqrt(2))", &[("Y_1", "", Some("-sqrt(2)/2"))]))),
    ("(1)", Some(("1.6", "8/5", &[("Y_1", "0.8", Some("E/2"))]))),
    ("(2)", None),
    ("(3)", Some(("0.632", "sqrt(2/5)", &[("Y_1", "0.948", Some("3/sqrt(10)"))]))),
    ("(3)", Some(("0.471", "sqrt(2)/3", &[("Y_1", "", Some("sqrt(2)/2"))]))),
    ("(4)", Some(("0.894", "2/sqrt(5)", &[("Y_1", "", Some("0")), ("Y_0", "0.447", Some("E/2"))]))),
    ("(4)", Some(("0.447", "1/sqrt(5)", &[("Y_1", "", Some("0")), ("Y_0", "0.894", Some("2*E"))]))),
    ("(4)", Some(("0.258", "(sqrt(3) - 1)/(2*sqrt(2))", &[("Y_1", "", Some("0")), ("Y_0", "", Some("-sqrt(2)/2"))]))),
    ("(4)", Some(("0.353", "1/(2*sqrt(2))", &[("Y_1", "", Some("0")), ("Y_0", "", Some("1/sqrt(2)"))]))),
    ("(4)", Some(("0.965", "(sqrt(2) + sqrt(6))/4", &[("Y_1", "", Some("0")), ("Y_0", "", Some("1/sqrt(2)"))]))),
    ("(4)", Some(("0.848", "3*sqrt(2)/5", &[("Y_1", "", Some("1/sqrt(2)")), ("Y_0", "0.989", Some("7/(5*sqrt(2))"))]))),
    ("(4)", Some(("0.282", "sqrt(2)/5", &[("Y_1", "", Some("-1/sqrt(2)")), ("Y_0", "0.141", Some("E/2"))]))),
    ("(5)", None),
    ("(6)", None),
];

/// `(κ, E_1 printed, E_1 closed form, ρ_{2κ} printed, ρ_{2κ} closed form)`.
pub(crate) type FirstBandRow = (u32, &'static str, Option<&'static str>, &'static str, Option<&'static str>);

pub(crate) const TABLE4: &[FirstBandRow] = &[
    (2, "2/3", Some("2/3"), "0.6428", Some("9/14")),
    (3, "1.3203", Some("(5 + 3*sqrt(2))/7"), "0.6027", Some("(170 - 81*sqrt(2))/92")),
    (4, "8/5", Some("8/5"), "0.5929", Some("625/1054")),
    (
        5,
        "1.7386",
        Some("(49 + 12*sqrt(10) + sqrt(5*(49 + 12*sqrt(10))))/62"),
        "0.5889",
        Some("(-4000073 + 2667375*sqrt(2) + 225*sqrt(5*(25786331 - 6299370*sqrt(2))))/3122396"),
    ),
    (6, "1.8164", Some("1 + sqrt(2/3)"), "0.5869", Some("27/46")),
    (7, "1.8642", None, "0.5857", None),
    (8, "1.8956", Some("(16 + 3*sqrt(2) + 2*sqrt(26 + 7*sqrt(2)))/17"), "0.5850", None),
    (9, "1.9173", None, "0.5844", None),
];

/// κ = 3 thresholds in `(−1/2, 1/2)`: `(item, printed, printed with "=" rather than "≃")`.
pub(crate) const SECTION8: &[(&str, &str, bool)] = &[
    ("1)", "0.169", false),
    ("2)", "0.25", true),
    ("3)", "-0.25", true),
    ("4)", "-0.1028", false),
    ("5)", "-0.16019", false),
    ("6)", "-0.1202", false),
    ("7)", "-0.17911", false),
    ("8)", "-0.11608", false),
    ("9)", "-0.10796", false),
    ("10)", "-0.11385", false),
    ("11)", "-0.08425", false),
    ("12)", "-0.0917", false),
    ("13)", "-0.07143", false),
    ("14)", "-0.14325", false),
    ("15)", "-0.05169", false),
    ("16)", "-0.06615", false),
    ("17)", "-0.08424", false),
    ("18)", "-0.18726", false),
    ("19)", "-0.2857", false),
    ("20)", "-0.40824", false),
    ("21)", "-0.2857", false),
    ("22)", "-0.13911", false),
    ("23)", "-0.06805", false),
    ("24)", "-0.0813", false),
    ("25)", "-0.07704", false),
    ("26)", "-0.05406", false),
    ("27)", "-0.08014", false),
    ("28)", "-0.04594", false),
    ("29)", "-0.27129", false),
    ("30)", "-0.1082", false),
    ("31)", "-0.38229", false),
    ("32)", "-0.4467", false),
    ("33)", "-0.34518", false),
    ("34)", "-0.43085", false),
    ("35)", "-0.105384", false),
    ("36)", "-0.05659", false),
    ("37)", "-0.04657", false),
    ("38)", "-0.09839", false),
    ("39)", "-0.08979", false),
    ("40)", "-0.03862", false),
    ("41)", "0.05439", false),
    ("42)", "0.04135", false),
    ("43)", "0.13104", false),
    ("44)", "0.14092", false),
    ("45)", "0.14142", false),
    ("46)", "0.12009", false),
    ("47)", "0.14121", false),
    ("48)", "0.11771", false),
    ("49)", "0.13562", false),
    ("50)", "0.34089", false),
    ("51)", "0.32821", false),
    ("52)", "0.31674", false),
    ("53)", "0.31404", false),
    ("54)", "0.31616", false),
    ("55)", "0.30948", false),
    ("56)", "0.36612", false),
    ("57)", "0.06397", false),
    ("58)", "0.07628", false),
    ("59)", "0.04454", false),
    ("60)", "0.05450", false),
    ("61)", "0.1001", false),
    ("62)", "0.08365", false),
    ("63)", "0.03773", false),
    ("64)", "0.03277", false),
    ("65)", "0.04901", false),
    ("66)", "0.05283", false),
    ("67)", "0.05445", false),
    ("68)", "0.02930", false),
    ("69)", "0.05402", false),
    ("70)", "0.04300", false),
    ("71)", "0.04030", false),
];

/// Items the source declares to be negatives of each other.
pub(crate) const SECTION8_NEGATION_PAIRS: &[(&str, &str)] = &[("2)", "3)")];
