mod support;

use abstext::content::parse_content;
use support::engine;

const RANKING: &str = "Article(content: [Ranking(subject: San Francisco (Q62), rank: 4, object: city (Q515), by: population (Q1613416), local_constraint: California (Q99))])";

#[test]
fn pattern_sentence_yields_a_ranking() {
    let e = engine();
    let found = e.suggest("Q62 is the fourth-most populous city in Q99", "en");
    assert_eq!(found[0].notation, RANKING);
    assert!(found[0].diagnostics.is_empty());
    assert_eq!(found[0].content, parse_content(RANKING).unwrap());
}

#[test]
fn labels_and_german() {
    let e = engine();
    let en = e.suggest("San Francisco is the fourth-most populous city in California.", "en");
    assert_eq!(en[0].notation, RANKING);
    let de = e.suggest("San Francisco ist die viertgrößte Stadt in Kalifornien", "de");
    // Labels follow the input language.
    let german = RANKING
        .replace("city", "Stadt")
        .replace("population", "Einwohnerzahl")
        .replace("California", "Kalifornien");
    assert_eq!(de[0].notation, german);
    let short = e.suggest("Q62 is the third-most populous city", "en");
    assert_eq!(short.len(), 1);
    assert!(short[0].notation.contains("rank: 3"));
}

#[test]
fn no_match() {
    let e = engine();
    assert!(e.suggest("", "en").is_empty());
    assert!(e.suggest("The weather is nice.", "en").is_empty());
    assert!(e.suggest("Q62 is the fourth-most populous city in Q99", "fr").is_empty());
}

#[test]
fn suggest_leaves_the_store_alone() {
    let e = engine();
    let before: Vec<String> = e.content_ids().map(String::from).collect();
    e.suggest("Q62 is the fourth-most populous city in Q99", "en");
    let after: Vec<String> = e.content_ids().map(String::from).collect();
    assert_eq!(before, after);
}
