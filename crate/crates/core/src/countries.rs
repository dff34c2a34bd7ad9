//! Country code universe.
//!
//! Codes are ISO 3166-1 alpha-2 plus the user-assigned `XK` used by
//! bibliographic databases for Kosovo. Legacy codes found in older metadata
//! exports are folded onto their current successors.

const ISO_ALPHA2: &str = "\
AD AE AF AG AI AL AM AO AQ AR AS AT AU AW AX AZ \
BA BB BD BE BF BG BH BI BJ BL BM BN BO BQ BR BS BT BV BW BY BZ \
CA CC CD CF CG CH CI CK CL CM CN CO CR CU CV CW CX CY CZ \
DE DJ DK DM DO DZ \
EC EE EG EH ER ES ET \
FI FJ FK FM FO FR \
GA GB GD GE GF GG GH GI GL GM GN GP GQ GR GS GT GU GW GY \
HK HM HN HR HT HU \
ID IE IL IM IN IO IQ IR IS IT \
JE JM JO JP \
KE KG KH KI KM KN KP KR KW KY KZ \
LA LB LC LI LK LR LS LT LU LV LY \
MA MC MD ME MF MG MH MK ML MM MN MO MP MQ MR MS MT MU MV MW MX MY MZ \
NA NC NE NF NG NI NL NO NP NR NU NZ \
OM \
PA PE PF PG PH PK PL PM PN PR PS PT PW PY \
QA \
RE RO RS RU RW \
SA SB SC SD SE SG SH SI SJ SK SL SM SN SO SR SS ST SV SX SY SZ \
TC TD TF TG TH TJ TK TL TM TN TO TR TT TV TW TZ \
UA UG UM US UY UZ \
VA VC VE VG VI VN VU \
WF WS \
XK \
YE YT \
ZA ZM ZW";

/// Legacy code -> current code.
const ALIASES: &[(&str, &str)] = &[
    ("UK", "GB"),
    ("TP", "TL"),
    ("ZR", "CD"),
    ("BU", "MM"),
    ("YU", "RS"),
    ("CS", "RS"),
    ("SU", "RU"),
    ("DD", "DE"),
    ("AN", "CW"),
    ("FX", "FR"),
];

/// All accepted canonical codes, sorted.
pub fn universe() -> Vec<&'static str> {
    ISO_ALPHA2.split_whitespace().collect()
}

/// Uppercases, trims and resolves aliases. Returns `None` for codes outside
/// the universe.
pub fn normalize(code: &str) -> Option<&'static str> {
    let upper = code.trim().to_ascii_uppercase();
    let target = ALIASES
        .iter()
        .find(|(legacy, _)| *legacy == upper)
        .map(|(_, current)| *current)
        .unwrap_or(upper.as_str());
    ISO_ALPHA2.split_whitespace().find(|c| *c == target)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn universe_is_sorted_and_unique() {
        let u = universe();
        assert!(u.windows(2).all(|w| w[0] < w[1]));
        assert_eq!(u.len(), 250);
    }

    #[test]
    fn aliases_resolve() {
        assert_eq!(normalize("uk"), Some("GB"));
        assert_eq!(normalize(" TP "), Some("TL"));
        assert_eq!(normalize("us"), Some("US"));
        assert_eq!(normalize("QQ"), None);
        for (_, current) in ALIASES {
            assert!(normalize(current).is_some());
        }
    }
}
