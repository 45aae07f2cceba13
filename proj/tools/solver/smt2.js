#!/usr/bin/env node
// Reads an SMT-LIB 2 script on stdin, evaluates it with the z3 wasm build and
// writes the solver output (check-sat verdicts, models, errors) to stdout.
//
// Usage: node smt2.js [--timeout-ms=N]
//
// --timeout-ms sets z3's own soft timeout, so long solves come back as
// "unknown" instead of being killed from outside.  A trailing comment line
//   ; solve-time-ms <float>
// reports the time spent inside the solver (script evaluation only), which
// excludes node/wasm startup.

const fs = require('fs');

async function main() {
  let soft = 0;
  for (const a of process.argv.slice(2)) {
    const m = a.match(/^--timeout-ms=(\d+)$/);
    if (m) soft = parseInt(m[1], 10);
  }
  const script = fs.readFileSync(0, 'utf8');
  const { init } = require('z3-solver');
  const { Z3 } = await init();
  if (soft > 0) Z3.global_param_set('timeout', String(soft));
  const cfg = Z3.mk_config();
  const ctx = Z3.mk_context(cfg);
  const t0 = process.hrtime.bigint();
  const out = await Z3.eval_smtlib2_string(ctx, script);
  const t1 = process.hrtime.bigint();
  process.stdout.write(out.endsWith('\n') || out === '' ? out : out + '\n');
  process.stdout.write(`; solve-time-ms ${(Number(t1 - t0) / 1e6).toFixed(3)}\n`);
  // eval_smtlib2_string reports problems as (error ...) lines in its output;
  // reaching this point means the solver itself ran fine.
  process.exit(0);
}

main().catch((e) => {
  console.error(String(e && e.stack ? e.stack : e));
  process.exit(1);
});
