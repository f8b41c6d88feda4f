#pragma once

namespace onoma::parallel {

/// Caps the OpenMP team size; 0 restores the runtime default.
void set_threads(int n);

/// Applies ONOMA_THREADS when set. Returns the value applied (0 = auto).
int configure_from_env();

int max_threads();

}  // namespace onoma::parallel
