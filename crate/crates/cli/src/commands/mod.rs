mod bracket;
mod helix;
mod rank;
mod szego;
mod verify;

use crate::cli::{BracketCmd, Command, RankCmd, SzegoCmd, VerifyCmd};
use crate::report::{Context, RunReport};
use crate::CliError;

pub fn run(cmd: &Command, ctx: &Context) -> Result<RunReport, CliError> {
    match cmd {
        Command::Bracket(BracketCmd::Build { curve, build, out }) => {
            bracket::build(ctx, curve, *build, out)
        }
        Command::Bracket(BracketCmd::Family {
            parity,
            k,
            build,
            out,
        }) => bracket::family(ctx, *parity, *k, *build, out),
        Command::Verify(VerifyCmd::Jacobi { input }) => verify::jacobi(input),
        Command::Verify(VerifyCmd::Compat { family }) => verify::compat(family),
        Command::Verify(VerifyCmd::Independence { family }) => verify::independence(family),
        Command::Verify(VerifyCmd::Linearity {
            parity,
            k,
            sampling,
        }) => verify::linearity(*parity, *k, sampling.seed, sampling.samples),
        Command::Rank(RankCmd::Scan {
            input,
            sampling,
            pencils,
            expect_rank,
            out,
        }) => rank::scan(
            ctx,
            input,
            sampling.seed,
            sampling.samples,
            *pencils,
            *expect_rank,
            out,
        ),
        Command::Szego(SzegoCmd::Check { curve, out }) => szego::check(ctx, curve, out),
        Command::Helix(args) => helix::run(ctx, args),
    }
}
