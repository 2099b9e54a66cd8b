#pragma once

namespace kreeb {

// Resource limits for the exhaustive parts (enumeration, certification,
// oracle closure, grid scans). All checks are exact; the caps only bound
// how much we are willing to enumerate.
struct Caps {
    long long max_order = 10000;        // largest finite group we enumerate
    long long max_grid_points = 1000000;  // largest fixed-point scan grid
};

}  // namespace kreeb
