#pragma once

#include <memory>
#include <optional>
#include <string_view>
#include <vector>

#include "segtrack/core/template.h"
#include "segtrack/params.h"

namespace segtrack {

// Target-conditioned segmentation of a searching area. init() receives the
// template built in the mode the segmenter declares; segment() returns a
// confidence map with the size of the searching-area patch.
class Segmenter {
 public:
  virtual ~Segmenter() = default;

  virtual std::string_view name() const = 0;
  virtual TemplateMode template_mode() const = 0;
  // Crop enlargement used when building the template (1 = the box).
  virtual double template_context() const { return 1.0; }
  // True when the segmenter reads ground truth after the first frame.
  virtual bool uses_ground_truth() const { return false; }

  // Throws ContractError if the template's mode is not template_mode().
  void init(const Template& tmpl);
  // Throws UsageError before init() unless the mode is BboxChannel, which
  // needs no first-frame state.
  ProbMap segment(const SearchingArea& sa);

  bool initialized() const { return initialized_; }

 protected:
  virtual void do_init(const Template& tmpl) = 0;
  virtual ProbMap do_segment(const SearchingArea& sa) = 0;

 private:
  bool initialized_ = false;
};

// Fills the tracker box inside the searching area with ones: the
// rectangular-mask baseline.
class RectFillSegmenter final : public Segmenter {
 public:
  std::string_view name() const override { return "rect"; }
  TemplateMode template_mode() const override { return TemplateMode::BboxChannel; }

 protected:
  void do_init(const Template&) override {}
  ProbMap do_segment(const SearchingArea& sa) override;
};

// Returns the ground-truth mask restricted to the searching area. For
// testing and ceiling analysis; `feed[0]` belongs to the init frame.
class OracleSegmenter final : public Segmenter {
 public:
  explicit OracleSegmenter(std::vector<BinaryMask> feed);

  std::string_view name() const override { return "oracle"; }
  TemplateMode template_mode() const override { return TemplateMode::CropWithMask; }
  bool uses_ground_truth() const override { return true; }

 protected:
  void do_init(const Template&) override;
  ProbMap do_segment(const SearchingArea& sa) override;

 private:
  std::vector<BinaryMask> feed_;
  std::size_t cursor_ = 0;
};

// Creates a segmenter by name ("rect", "oracle", "colorbayes", "external").
// The oracle needs `gt_feed`. Throws ConfigError on unknown names.
std::unique_ptr<Segmenter> make_segmenter(const ComponentSpec& spec,
                                          const std::vector<BinaryMask>* gt_feed);

}  // namespace segtrack
