#pragma once

// Wigner 3j/6j/9j symbols evaluated from the Racah formulas with exact
// big-integer rational sums (arguments up to ~40), converted to double at
// the end and cached.  Lookups are safe from concurrent threads.
namespace qedmb::wigner {

bool triangle(double a, double b, double c);

double three_j(double j1, double j2, double j3, double m1, double m2,
               double m3);

double clebsch(double j1, double m1, double j2, double m2, double j, double m);

double six_j(double j1, double j2, double j3, double j4, double j5,
             double j6);

double nine_j(double j1, double j2, double j3, double j4, double j5,
              double j6, double j7, double j8, double j9);

}  // namespace qedmb::wigner
