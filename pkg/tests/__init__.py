# Tests for the powerstruct engine
