# tests for dftn.logging
