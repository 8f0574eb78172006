//! Print tokens with their fine/coarse tags and detected verb groups, one line per argument.

fn main() {
    let a = lingshift::Annotator::builtin().unwrap();
    for line in std::env::args().skip(1) {
        let t = a.annotate(&line);
        let s: Vec<String> = t.tokens.iter().zip(&t.xpos).zip(&t.tags).map(|((k, x), g)| format!("{}/{}/{}", k.surface, x, g.coarse)).collect();
        println!("{}  groups={:?}", s.join(" "), t.verb_groups.iter().map(|g| (g.head_index, g.voice, g.tense)).collect::<Vec<_>>());
    }
}
