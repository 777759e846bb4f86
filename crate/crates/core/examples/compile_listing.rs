//! Parse the bundled agent, compile it to a plan table, and show that the
//! binary form decodes back to the same program.

use bdi_maze::asl::parse_program;
use bdi_maze::plan_table::{compile, decode, encode};

fn main() {
    let program = parse_program(include_str!("listing1.asl")).expect("listing parses");
    let table = compile(&program).expect("fits the table format");
    let bytes = encode(&table);
    println!(
        "{} plans, {} atoms, {} bytes encoded\n",
        table.plans.len(),
        table.atoms.len(),
        bytes.len()
    );

    let decoded = decode(&bytes).expect("own encoding decodes");
    assert_eq!(decoded, table);
    assert_eq!(decoded.to_program(), program);
    print!("{}", decoded.dump());
}
