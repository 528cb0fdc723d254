# tests for dftn.utils
