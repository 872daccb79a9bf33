"""Instance families, experiments, reports and the command-line interface."""
