//! Rank competing analyses of a prepositional-attachment ambiguity by the
//! weighted sum of their preference-function scores.
//!
//! The sentence "do I get dinner on this flight" has a high attachment
//! (on the verb) and a low attachment (on the noun). Three functions favour
//! the low attachment for syntactic reasons; a semantic-collocation
//! function strongly favours the high one and overrides them.
//!
//! ```bash
//! cargo run -p prefrank --example rank_analyses
//! ```

use prefrank::corpus::read_corpus;
use prefrank::eval::rank;
use prefrank::score::exact_match;
use prefrank::train::ScalingFactors;

const CORPUS: &str = concat!(
    r#"{"function_names":["Low1","Low2","SynRules","SemColl"],"class_map":{}}"#,
    "\n",
    r#"{"id":"dinner","tokens":["do","i","get","dinner","on","this","flight"],"#,
    r#""gold":[[0,7,"P"],[1,2,"A"],[3,4,"A"],[4,7,"P"],[5,7,"A"]],"analyses":["#,
    r#"{"id":"high","spans":[[0,7,"P"],[1,2,"A"],[3,4,"A"],[4,7,"P"],[5,7,"A"]],"#,
    r#""triples":[["get_Acquire","2","personal"],["get_Acquire","3","cc_SpecificMeal"],["get_Acquire","on","flight_AirplaneTrip"]],"#,
    r#""rules":[],"features":{"Low1":-9.08,"Low2":-2.8,"SynRules":-13.08,"SemColl":24.32}},"#,
    r#"{"id":"low","spans":[[0,7,"P"],[1,2,"A"],[3,7,"A"],[4,7,"P"],[5,7,"A"]],"#,
    r#""triples":[["get_Acquire","2","personal"],["get_Acquire","3","cc_SpecificMeal"],["cc_SpecificMeal","on","flight_AirplaneTrip"]],"#,
    r#""rules":[],"features":{"Low1":-4.03,"Low2":0.0,"SynRules":-12.78,"SemColl":3.38}}]}"#,
    "\n",
);

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let corpus = read_corpus(CORPUS.as_bytes())?;
    let sentence = &corpus.sentences[0];
    println!("sentence: {}", sentence.tokens.join(" "));

    println!("\nscaled component scores:");
    println!("{:<12}{:>10}{:>10}", "function", "high", "low");
    for name in &corpus.function_names {
        println!(
            "{:<12}{:>10.2}{:>10.2}",
            name,
            sentence.analyses[0].feature(name),
            sentence.analyses[1].feature(name)
        );
    }

    // The component scores are already scaled, so the combination weights
    // are all one.
    let ones = ScalingFactors::new(vec![1.0; corpus.function_names.len()]);
    let ranked = rank(sentence, &corpus.function_names, &ones);
    println!("\nranking:");
    for (id, score) in &ranked {
        let analysis = sentence.analyses.iter().find(|a| &a.id == id).unwrap();
        println!(
            "  {id}: total {score:+.2} (exactly correct = {})",
            exact_match(analysis, &sentence.gold)
        );
    }
    println!(
        "\nonly the collocation function prefers the high attachment, but its\n\
         margin is large enough to override the other three"
    );
    Ok(())
}
