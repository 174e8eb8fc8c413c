"""Package that contains the classes rendering documents, graphs and solver dumps."""
