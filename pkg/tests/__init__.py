# Tests package.
