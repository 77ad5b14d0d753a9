# Reproduce the two-annotator pilot analysis: contingency table, Cohen's
# kappa with CI, and the restricted variant that drops the hard cases
# (inconclusive origin and multi-language exceptions).

from turklex import RESTRICTED_EXCLUDED_CODES, build_contingency, cohen_kappa
from turklex.fixtures import PILOT_CATEGORIES, pilot_matrix, pilot_paired_logs
from turklex.reports import render_agreement_report

# The bundled counts ship as a matrix, and also as a pair of synthetic
# annotation logs that reproduce the matrix through the normal pipeline.
records_a, records_b = pilot_paired_logs()
matrix = build_contingency(records_a, records_b, PILOT_CATEGORIES)
assert matrix.counts == pilot_matrix().counts

full = cohen_kappa(matrix)
print(render_agreement_report(matrix, full, None, restricted=False))

# Restricting to slots where neither annotator used Q/X/V/N isolates the
# easy single-origin decisions; agreement there is much higher.
submatrix = matrix.restrict(RESTRICTED_EXCLUDED_CODES)
print(render_agreement_report(submatrix, cohen_kappa(submatrix), None, restricted=True))

# Note in the output: the pilot's own published kappa values differ from
# what these counts yield under the standard estimator; the report
# surfaces both rather than silently picking one.
