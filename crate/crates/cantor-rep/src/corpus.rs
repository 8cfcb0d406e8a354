use crate::pattern::{parse_pattern, Pattern};

/// Built-in demonstration patterns: the shapes every suite run and the
/// acceptance checks compile. Names are stable identifiers for reports.
pub fn bundled() -> Vec<(String, Pattern)> {
    BUNDLED_SOURCES
        .iter()
        .map(|(name, text)| {
            let pattern = parse_pattern(text).expect("bundled corpus parses");
            (name.to_string(), pattern)
        })
        .collect()
}

/// Raw document text for each bundled pattern, for tooling that wants the
/// JSON itself (the CLI ships these as defaults).
pub fn bundled_sources() -> &'static [(&'static str, &'static str)] {
    BUNDLED_SOURCES
}

const BUNDLED_SOURCES: &[(&str, &str)] = &[
    ("arc", include_str!("../corpus/arc.json")),
    ("three-od", include_str!("../corpus/three_od.json")),
    ("four-od", include_str!("../corpus/four_od.json")),
    ("triangle", include_str!("../corpus/triangle.json")),
    ("circle", include_str!("../corpus/circle.json")),
    ("three-points", include_str!("../corpus/points3.json")),
    ("hierarchy", include_str!("../corpus/hierarchy.json")),
    ("polycrystal", include_str!("../corpus/polycrystal2.json")),
];
