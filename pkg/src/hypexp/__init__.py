"""Exact exponential-sum trace functions over small finite fields.

Subpackages:
  field        finite fields GF(p^r), characters, discrete logs
  cyclo        exact sums of roots of unity, Gauss-sum group rings, p-adic ords
  sheaf        trace-function engines, Mellin/determinant identities, matchers
  kubert       base-p digit arithmetic, V-function, finiteness criterion
  fingerprint  character-table queries and candidate-group elimination
  cli          reproducible command-line runs with JSON reports
"""

__version__ = "0.1.0"
