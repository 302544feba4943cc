//! Reading and writing the JSON file formats.

use walg::io::{emit_constraints, parse_constraints, parse_space, parse_structure_constants, to_text};
use walg::reduced::{check_constraints, generate_constraints, GenerateOptions};

fn main() -> walg::Result<()> {
    let space = parse_space(r#"{"grades":[{"dim":1,"fields":["X1","X2","X3"]}]}"#)?;
    // one orientation per pair; the partner entries are filled in
    let f = parse_structure_constants(
        r#"[{"A":"X1","B":"X2","C":"X3","value":"1"},
            {"A":"X2","B":"X3","C":"X1","value":"1"},
            {"A":"X3","B":"X1","C":"X2","value":"1"}]"#,
        &space,
    )?;
    println!("{} stored entries", f.entries().count());

    let sys = generate_constraints(&space, 3, GenerateOptions::default());
    let text = to_text(&emit_constraints(&space, &sys));
    let back = parse_constraints(&text, &space)?;
    println!("constraints round-trip: {}", back.constraints == sys.constraints);
    println!("violations: {}", check_constraints(&back, &f).len());

    if let Err(e) = parse_space(r#"{"grades":[{"dim":0,"fields":["I"]}]}"#) {
        println!("rejected: {e}");
    }
    Ok(())
}
