"""Package containing the command handlers of the command line interface."""
