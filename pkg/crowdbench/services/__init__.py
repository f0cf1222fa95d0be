"""Services of the benchmark: simulators, forecasters, categorizer, metrics and grids."""
