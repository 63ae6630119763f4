//! Rewrites the `tN.out` files of every corpus entry from its reference
//! program (`fixed.c` for buggy entries, `program.c` otherwise).

use std::fs;
use std::path::Path;

use mbdfl_core::corpus::corpus_dir;
use mbdfl_core::exec::{run_concrete, ExecStatus, Limits};
use mbdfl_core::frontend::parse_program;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let limits = Limits {
        max_loop_iterations: u32::MAX,
        ..Limits::default()
    };
    for group in ["buggy", "correct"] {
        let mut dirs: Vec<_> = fs::read_dir(corpus_dir().join(group))?
            .map(|e| e.map(|e| e.path()))
            .collect::<Result<_, _>>()?;
        dirs.sort();
        for dir in dirs {
            let reference = if dir.join("fixed.c").exists() { "fixed.c" } else { "program.c" };
            let program = parse_program(&fs::read_to_string(dir.join(reference))?)?;
            regen(&dir.join("tests"), &program, &limits)?;
            println!("{}", dir.display());
        }
    }
    Ok(())
}

fn regen(tests: &Path, program: &mbdfl_core::Program, limits: &Limits) -> Result<(), Box<dyn std::error::Error>> {
    for entry in fs::read_dir(tests)? {
        let path = entry?.path();
        if path.extension().is_none_or(|e| e != "in") {
            continue;
        }
        let inputs: Vec<i64> = fs::read_to_string(&path)?
            .split_whitespace()
            .map(str::parse)
            .collect::<Result<_, _>>()?;
        let r = run_concrete(program, &inputs, limits);
        if r.status != ExecStatus::Completed {
            return Err(format!("{}: {:?}", path.display(), r.status).into());
        }
        let text: Vec<String> = r.output.iter().map(i64::to_string).collect();
        fs::write(path.with_extension("out"), text.join(" ") + "\n")?;
    }
    Ok(())
}
