"""Growing graphs, tableaux, generators and the command-line entry point."""
