"""
Benchmarking the corpus
=======================

Runs the harness over the bundled Canterbury texts and prints the
summary table. The same run is available as ``salz bench tests/data/canterbury``.
"""

import sys

from salz.bench import format_table, run_bench, to_csv

corpus = sys.argv[1] if len(sys.argv) > 1 else "tests/data/canterbury"
rows = run_bench(corpus, jobs=2)
print(format_table(rows))

# the CSV form is what the CLI writes with --csv
to_csv(rows[:3], sys.stdout)
