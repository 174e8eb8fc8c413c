"""Package containing manager classes."""
