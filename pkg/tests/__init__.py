# tests for dftn package
