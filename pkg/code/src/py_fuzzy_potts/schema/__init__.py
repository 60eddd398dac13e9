# vim: ai:sw=4:ts=4:sta:et:fo=croql
"""JSON schema of the reports, loaded with :py:func:`py_fuzzy_potts.report.load_schema`."""
