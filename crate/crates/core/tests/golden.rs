use glex_core::{pretty_print, seed};

#[test]
fn pressoir_pretty_matches_golden() {
    let lex = seed::lexicon();
    let got = pretty_print(lex.get_lemma("pressoir").unwrap());
    let path = concat!(
        env!("CARGO_MANIFEST_DIR"),
        "/../../data/golden/pressoir.pretty.txt"
    );
    if std::env::var_os("GLEX_BLESS").is_some() {
        std::fs::write(path, &got).unwrap();
    }
    assert_eq!(got, std::fs::read_to_string(path).unwrap());
}
