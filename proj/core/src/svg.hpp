#pragma once

#include <filesystem>
#include <sstream>
#include <string>
#include <string_view>

namespace tdrk::svg {

/// Minimal SVG document builder.
class Canvas {
 public:
  Canvas(double width, double height);

  void rect(double x, double y, double w, double h, std::string_view fill,
            std::string_view stroke = "none", double stroke_width = 0.0);
  void line(double x0, double y0, double x1, double y1, std::string_view stroke,
            double width = 1.0, std::string_view dash = {});
  void polyline(std::string_view points, std::string_view stroke, double width,
                std::string_view dash = {});
  void circle(double cx, double cy, double r, std::string_view fill);
  void text(double x, double y, std::string_view content, double size = 12.0,
            std::string_view anchor = "middle", double rotate = 0.0);

  [[nodiscard]] std::string str() const;
  /// Throws IoError on failure.
  void save(const std::filesystem::path& path) const;

 private:
  double width_;
  double height_;
  std::ostringstream body_;
};

std::string escape(std::string_view text);

/// Writes `content` to `path`, creating parent directories. Throws IoError.
void write_file(const std::filesystem::path& path, std::string_view content);

}  // namespace tdrk::svg
