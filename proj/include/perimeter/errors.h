#ifndef PERIMETER_ERRORS_H_
#define PERIMETER_ERRORS_H_

#include <stdexcept>
#include <string>

namespace perimeter {

// Malformed or unreadable input: images, vertex files, configs, flags.
class InputError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A request that is well-formed but exceeds a size bound (oracle cap,
// tabular sanity bound).
class RefusalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// An action that is not legal in the state it was applied to.
class IllegalMoveError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

// Broken contract or internal invariant.
class InvariantError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

class BoundsError : public std::out_of_range {
 public:
  BoundsError(int x, int y, int width, int height)
      : std::out_of_range("pixel (" + std::to_string(x) + ", " +
                          std::to_string(y) + ") outside " +
                          std::to_string(width) + "x" +
                          std::to_string(height) + " frame"),
        x_(x), y_(y), width_(width), height_(height) {}

  int x() const { return x_; }
  int y() const { return y_; }
  int width() const { return width_; }
  int height() const { return height_; }

 private:
  int x_, y_, width_, height_;
};

}  // namespace perimeter

#endif  // PERIMETER_ERRORS_H_
