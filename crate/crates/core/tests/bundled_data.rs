//! Checks of the bundled Ukrainian dataset against the published tables.

use std::path::PathBuf;

use scriptstat::bundle::{load_bundle, ukrainian};
use scriptstat::complexity::{
    complexity_distribution, complexity_stats, letter_complexity, runs_test_uniform,
};
use scriptstat::distinctivity::mean_distinctivities;
use scriptstat::io;
use scriptstat::model::{representation_histogram, ComponentKind, ConnectionKind, FrequencyTable};
use scriptstat::report::{bundle_report, complexity_report, emit_report, ReportFormat};

fn data(file: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("../../data/uk")
        .join(file)
}

/// Published per-letter rows: glyph, components, connections, complexity.
const PRINTED_COMPLEXITY: [(char, &str, &str, u32); 33] = [
    ('А', "3×2", "3×2", 12),
    ('Б', "2×2+3", "3×2", 13),
    ('В', "2+2×3", "4×2", 16),
    ('Г', "2×2", "2", 6),
    ('Ґ', "3×2", "2×2", 10),
    ('Д', "5×2+3", "6×2", 25),
    ('Е', "4×2", "3×2", 14),
    ('Є', "2+2×3", "1+2", 11),
    ('Ж', "3×2+3×3", "2×1+2×2+3", 26),
    ('З', "4×3", "2×1+2", 16),
    ('И', "3×2", "2×2", 10),
    ('І', "2", "—", 2),
    ('Ї', "2+2×1", "—", 4),
    ('Й', "3×2+3", "2×2", 13),
    ('К', "2×3+2×2", "2×2+1", 18),
    ('Л', "2×2+3", "2×2", 11),
    ('М', "4×2", "3×2", 14),
    ('Н', "3×2", "2×2", 10),
    ('О', "2×3", "2×1", 8),
    ('П', "3×2", "2×2", 10),
    ('Р', "2+3", "2×2", 9),
    ('С', "2×3", "1", 7),
    ('Т', "2×2", "2", 6),
    ('У', "2+3", "2", 7),
    ('Ф', "2×3+2", "2×1+2×3", 16),
    ('Х', "2×2", "3", 7),
    ('Ц', "4×2", "3×2", 14),
    ('Ч', "2+3", "2", 7),
    ('Ш', "4×2", "3×2", 14),
    ('Щ', "5×2", "4×2", 18),
    ('Ь', "2+3", "2×2", 9),
    ('Ю', "2×2+2×3", "2×2+2×1", 16),
    ('Я', "2×2+3", "3×2", 13),
];

/// Published complexity histogram over 2..=26.
const PRINTED_COMPLEXITY_HISTOGRAM: [u64; 25] = [
    1, 0, 1, 0, 2, 4, 1, 2, 4, 2, 1, 3, 4, 1, 4, 0, 1, 0, 0, 0, 0, 0, 0, 1, 1,
];

/// Published per-letter mean distinctivities.
const PRINTED_MEANS: [(char, f64); 33] = [
    ('А', 24.84),
    ('Б', 20.97),
    ('В', 27.53),
    ('Г', 15.53),
    ('Ґ', 18.06),
    ('Д', 31.75),
    ('Е', 24.03),
    ('Є', 21.81),
    ('Ж', 41.22),
    ('З', 30.53),
    ('И', 20.34),
    ('І', 15.25),
    ('Ї', 17.22),
    ('Й', 20.66),
    ('К', 25.53),
    ('Л', 18.25),
    ('М', 26.03),
    ('Н', 19.69),
    ('О', 22.16),
    ('П', 18.69),
    ('Р', 19.53),
    ('С', 20.47),
    ('Т', 16.78),
    ('У', 19.88),
    ('Ф', 31.88),
    ('Х', 21.94),
    ('Ц', 22.72),
    ('Ч', 18.53),
    ('Ш', 23.91),
    ('Щ', 28.28),
    ('Ь', 20.09),
    ('Ю', 24.62),
    ('Я', 27.16),
];

/// Evaluates a printed `count×weight+...` formula.
fn formula_value(s: &str) -> u32 {
    if s == "—" {
        return 0;
    }
    s.split('+')
        .map(|term| match term.split_once('×') {
            Some((n, w)) => n.parse::<u32>().unwrap() * w.parse::<u32>().unwrap(),
            None => term.parse::<u32>().unwrap(),
        })
        .sum()
}

#[test]
fn alphabet_file_shape() {
    let a = io::parse_alphabet_file(data("uk_cyrillic.alphabet")).unwrap();
    assert_eq!(a.len(), 33);
    let first = a.letter('А').unwrap();
    assert_eq!(first.components.len(), 3);
    assert!(first
        .components
        .iter()
        .all(|c| c.kind == ComponentKind::Line));
    assert_eq!(first.connections, vec![ConnectionKind::Crisp; 3]);
    let order: String = a.letters.iter().map(|l| l.glyph).collect();
    assert_eq!(
        order,
        PRINTED_COMPLEXITY.iter().map(|r| r.0).collect::<String>()
    );
}

#[test]
fn complexities_match_printed_rows_except_errata() {
    let a = ukrainian().alphabet;
    let mut mismatches = Vec::new();
    for (letter, &(glyph, _, _, printed)) in a.letters.iter().zip(&PRINTED_COMPLEXITY) {
        assert_eq!(letter.glyph, glyph);
        if letter_complexity(letter) != printed {
            mismatches.push(glyph);
        }
    }
    assert_eq!(mismatches, vec!['К']);
    assert_eq!(letter_complexity(a.letter('К').unwrap()), 15);
}

#[test]
fn printed_formulas_are_self_consistent_except_errata() {
    // К's printed formulas sum to 15, Ж's to 24; both disagree with the printed total.
    let inconsistent: Vec<char> = PRINTED_COMPLEXITY
        .iter()
        .filter(|(_, comp, conn, c)| formula_value(comp) + formula_value(conn) != *c)
        .map(|r| r.0)
        .collect();
    assert_eq!(inconsistent, vec!['Ж', 'К']);
}

#[test]
fn rendered_formulas_match_printed_ones() {
    let text = emit_report(
        &complexity_report(&ukrainian().alphabet).unwrap(),
        ReportFormat::Csv,
    );
    let rows: Vec<&str> = text.lines().skip(1).collect();
    assert_eq!(rows.len(), 33);
    for (row, &(glyph, comp, conn, printed)) in rows.iter().zip(&PRINTED_COMPLEXITY) {
        let fields: Vec<&str> = row.split(',').collect();
        assert_eq!(fields[0], glyph.to_string());
        assert_eq!(fields[1], comp, "{glyph}");
        match glyph {
            'Ж' => assert_eq!((fields[2], fields[3]), ("4×2+3", "26")),
            'К' => assert_eq!((fields[2], fields[3]), (conn, "15")),
            _ => assert_eq!(
                (fields[2], fields[3]),
                (conn, printed.to_string().as_str()),
                "{glyph}"
            ),
        }
    }
}

#[test]
fn complexity_histogram_equals_printed() {
    let a = ukrainian().alphabet;
    let dist = complexity_distribution(&a).unwrap();
    let ours: Vec<(u32, u64)> = dist.iter().collect();
    let printed: Vec<(u32, u64)> = (2..=26).zip(PRINTED_COMPLEXITY_HISTOGRAM).collect();
    assert_eq!(ours, printed);
    let weighted: u64 = dist.iter().map(|(c, f)| c as u64 * f).sum();
    let direct: u64 = a.letters.iter().map(|l| letter_complexity(l) as u64).sum();
    assert_eq!(weighted, 389);
    assert_eq!(direct, 389);
    let stats = complexity_stats(&a).unwrap();
    assert!((stats.mean - 389.0 / 33.0).abs() < 1e-12);
}

#[test]
fn runs_test_on_bundled_alphabet() {
    let dist = complexity_distribution(&ukrainian().alphabet).unwrap();
    let r = runs_test_uniform(&dist).unwrap();
    assert_eq!((r.runs, r.n, r.n1, r.n2), (9, 25, 17, 8));
    assert!((r.expected_frequency - 1.32).abs() < 1e-12);
    // 1 + 2·17·8/25
    assert!((r.expected_runs - 11.88).abs() < 1e-12);
    assert!(!r.significant);
}

#[test]
fn mapping_file() {
    let m = io::parse_mapping_file(data("uk_mapping.csv")).unwrap();
    assert_eq!(m.len(), 38);
    assert_eq!(m.representations("tsʲ").unwrap().len(), 6);
    for ipa in ["ʃ", "dzʲ"] {
        assert_eq!(m.representations(ipa).unwrap().len(), 6, "{ipa}");
    }
    let h = representation_histogram(&m).unwrap();
    let printed =
        FrequencyTable::from_pairs([(1, 10), (2, 12), (3, 9), (4, 2), (5, 2), (6, 3)]).unwrap();
    assert_eq!(h, printed);
}

#[test]
fn matrix_file() {
    let m = io::parse_matrix_file(data("uk_distances.csv")).unwrap();
    assert_eq!(m.len(), 33);
    assert_eq!(m.get('А', 'Б'), Some(26));
    let stats = mean_distinctivities(&m).unwrap();
    let zh: u32 = m.rows()[8].iter().sum();
    assert_eq!(zh, 1319);
    assert!((stats.mean_of('Ж').unwrap() - 1319.0 / 32.0).abs() < 1e-12);
    let total: u64 = m.rows().iter().flatten().map(|&v| v as u64).sum();
    assert!((stats.overall - total as f64 / (32.0 * 33.0)).abs() < 1e-12);
    assert!((stats.overall - 22.55).abs() < 0.01);
}

#[test]
fn variant_matrix_reproduces_every_printed_mean() {
    let m = io::parse_matrix_file(data("uk_distances_ya_variant.csv")).unwrap();
    let base = io::parse_matrix_file(data("uk_distances.csv")).unwrap();
    let stats = mean_distinctivities(&m).unwrap();
    for (glyph, printed) in PRINTED_MEANS {
        let ours = stats.mean_of(glyph).unwrap();
        assert!(
            (ours - printed).abs() < 0.005,
            "{glyph}: {ours} vs {printed}"
        );
    }
    // only the Я row and column differ
    let ya = m.labels().iter().position(|&g| g == 'Я').unwrap();
    for i in 0..33 {
        for j in 0..33 {
            if i != ya && j != ya {
                assert_eq!(m.rows()[i][j], base.rows()[i][j]);
            }
        }
    }
    assert!((stats.overall - 24188.0 / 1056.0).abs() < 1e-12);
}

#[test]
fn connection_table() {
    let t = io::parse_frequency_file(data("uk_connections.csv")).unwrap();
    let printed =
        FrequencyTable::from_pairs([(0, 2), (1, 6), (2, 10), (3, 8), (4, 5), (5, 1), (6, 1)])
            .unwrap();
    assert_eq!(t, printed);
    let sum: u64 = t.iter().map(|(x, f)| x as u64 * f).sum();
    assert_eq!(sum, 81);
    // the alphabet itself differs by one letter
    let derived = FrequencyTable::from_observations(
        ukrainian()
            .alphabet
            .letters
            .iter()
            .map(|l| l.connections.len() as u32),
    );
    assert_eq!((derived.get(3), derived.get(4)), (9, 4));
}

#[test]
fn bundled_files_round_trip() {
    let b = load_bundle(data("")).unwrap();

    let text = io::serialize_alphabet(&b.alphabet);
    let again = io::parse_alphabet(&text, "x").unwrap();
    assert_eq!(again, b.alphabet);
    assert_eq!(io::serialize_alphabet(&again), text);

    let text = io::serialize_mapping(&b.mapping);
    let again = io::parse_mapping(&text, "x").unwrap();
    assert_eq!(again, b.mapping);
    assert_eq!(io::serialize_mapping(&again), text);

    let text = io::serialize_matrix(&b.distances);
    assert_eq!(io::parse_matrix(&text, "x").unwrap(), b.distances);
    assert_eq!(
        io::serialize_matrix(&io::parse_matrix(&text, "x").unwrap()),
        text
    );

    let text = io::serialize_comparison(&b.comparison);
    assert_eq!(io::parse_comparison(&text, "x").unwrap(), b.comparison);

    let table = b.connections.unwrap();
    let text = io::serialize_frequency_table(&table);
    assert_eq!(io::parse_frequency_table(&text, "x").unwrap(), table);
}

#[test]
fn bundled_data_without_comments_is_unchanged_by_serialization() {
    // the shipped matrix has no quoting or spacing beyond the canonical form
    let raw = std::fs::read_to_string(data("uk_distances.csv")).unwrap();
    let body: String = raw
        .lines()
        .filter(|l| !l.starts_with('#'))
        .map(|l| format!("{l}\n"))
        .collect();
    let m = io::parse_matrix(&raw, "x").unwrap();
    assert_eq!(io::serialize_matrix(&m), body);
}

#[test]
fn bundle_report_is_deterministic_in_every_format() {
    let b = ukrainian();
    for format in [
        ReportFormat::Text,
        ReportFormat::Csv,
        ReportFormat::Markdown,
    ] {
        let first = emit_report(&bundle_report(&b).unwrap(), format);
        let second = emit_report(&bundle_report(&b).unwrap(), format);
        assert_eq!(first, second);
        assert!(!first.is_empty());
    }
}

#[test]
fn bundle_report_contents() {
    let text = emit_report(&bundle_report(&ukrainian()).unwrap(), ReportFormat::Text);
    for line in [
        "chi_square=1.90",
        "P(df=3)=0.59",
        "P(df=5)=0.86",
        "Ū=1.1227",
        "x̄=2.5526",
        "s²=2.1420",
        "V(Ū)=0.018022",
        "chi_square=1.52",
        "P(df=5)=0.91",
        "lambda=2.4545",
        "r=9",
        "n1=17",
        "n2=8",
        "E(r)=11.88",
        "D̄=22.5455",
    ] {
        assert!(text.lines().any(|l| l == line), "missing {line:?}");
    }
    for row in [
        "German     0.9650  0.006847  1.00  no",
        "Italian    0.5641  0.006189  3.59  yes",
    ] {
        assert!(text.lines().any(|l| l == row), "missing {row:?}");
    }
    assert!(text.contains("note: К: printed complexity 18"));
}
