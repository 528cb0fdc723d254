# tests for dftn.commands
