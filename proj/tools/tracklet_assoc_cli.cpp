// Command-line front end: refine tracker output, evaluate against ground
// truth, and generate synthetic sequences.

#include <cstdio>
#include <exception>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include "CLI11.hpp"
#include "tracklet_assoc.hpp"

namespace fs = std::filesystem;
using namespace tracklet_assoc;

namespace {

std::ifstream open_input(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  return in;
}

std::vector<Detection> load_tracks(const std::string& path) {
  auto in = open_input(path);
  try {
    return parse_tracks(in);
  } catch (const ParseError& e) {
    throw std::runtime_error(path + ": " + e.what());
  }
}

// Writes through a sibling temporary file so a failure never leaves a partial output.
void write_atomically(const fs::path& path, const std::function<void(std::ostream&)>& body) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  fs::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot write " + tmp.string());
    body(out);
    out.flush();
    if (!out) {
      out.close();
      fs::remove(tmp);
      throw std::runtime_error("write failed for " + path.string());
    }
  }
  fs::rename(tmp, path);
}

struct MetaOptions {
  std::string seqinfo;
  std::optional<double> fps;
  std::optional<int> width, height, length;

  void add_to(CLI::App& cmd) {
    cmd.add_option("--seqinfo", seqinfo, "seqinfo.ini with frameRate/imWidth/imHeight/seqLength");
    cmd.add_option("--fps", fps, "frame rate (overrides seqinfo)");
    cmd.add_option("--width", width, "image width in pixels (overrides seqinfo)");
    cmd.add_option("--height", height, "image height in pixels (overrides seqinfo)");
    cmd.add_option("--length", length, "number of frames (overrides seqinfo)");
  }

  SequenceMeta resolve() const {
    SequenceMeta meta;
    if (!seqinfo.empty()) {
      auto in = open_input(seqinfo);
      try {
        meta = read_seqinfo(in);
      } catch (const ParseError& e) {
        throw std::runtime_error(seqinfo + ": " + e.what());
      }
    } else if (!fps || !width || !height) {
      throw std::runtime_error("sequence metadata required: --seqinfo or --fps/--width/--height");
    }
    if (fps) meta.fps = *fps;
    if (width) meta.img_width = *width;
    if (height) meta.img_height = *height;
    if (length) meta.num_frames = *length;
    meta.validate();
    return meta;
  }
};

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Tracklet cutting, constraint-based association and gap interpolation for MOT output"};
  app.require_subcommand(1);

  // refine
  auto* refine_cmd = app.add_subcommand("refine", "post-process a tracker output file");
  std::string input, output, config_path, dump_path;
  bool no_cutter = false, no_interp = false, quiet = false;
  MetaOptions refine_meta;
  refine_cmd->add_option("-i,--input", input, "tracker output (MOTChallenge format)")->required();
  refine_cmd->add_option("-o,--output", output, "refined output file")->required();
  refine_cmd->add_option("-c,--config", config_path, "key = value pipeline configuration");
  refine_cmd->add_option("--dump-candidates", dump_path, "write the candidate table as TSV");
  refine_cmd->add_flag("--no-cutter", no_cutter, "disable tracklet cutting");
  refine_cmd->add_flag("--no-interp", no_interp, "disable gap interpolation");
  refine_cmd->add_flag("-q,--quiet", quiet, "do not print the summary");
  refine_meta.add_to(*refine_cmd);

  // eval
  auto* eval_cmd = app.add_subcommand("eval", "compute MOTA and IDF1 against ground truth");
  std::string gt_path, pred_path, sequence = "sequence", csv_path;
  double match_iou = kDefaultMatchIou;
  eval_cmd->add_option("--gt", gt_path, "ground-truth tracks")->required();
  eval_cmd->add_option("--pred", pred_path, "predicted tracks")->required();
  eval_cmd->add_option("--sequence", sequence, "sequence name used in the report");
  eval_cmd->add_option("--iou", match_iou, "IoU gate for a match")->check(CLI::Range(0.0, 1.0));
  eval_cmd->add_option("--csv", csv_path, "append a `sequence,MOTA,IDF1,FP,FN,IDSW` row to this file");

  // synth
  auto* synth_cmd = app.add_subcommand("synth", "generate a synthetic ground truth and a corrupted copy");
  std::string synth_config, out_dir;
  synth_cmd->add_option("-c,--config", synth_config, "scenario/corruption key = value file");
  synth_cmd->add_option("-o,--out-dir", out_dir, "output directory")->required();

  // defaults
  auto* defaults_cmd = app.add_subcommand("defaults", "print the default pipeline configuration");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*refine_cmd) {
      const SequenceMeta meta = refine_meta.resolve();
      PipelineConfig cfg;
      if (!config_path.empty()) {
        auto in = open_input(config_path);
        try {
          cfg = read_pipeline_config(in);
        } catch (const ParseError& e) {
          throw std::runtime_error(config_path + ": " + e.what());
        }
      }
      if (no_cutter) cfg.cutter.enabled = false;
      if (no_interp) cfg.interpolation.enabled = false;

      const auto detections = load_tracks(input);
      std::ostringstream dump;
      const auto result = refine(detections, meta, cfg, dump_path.empty() ? nullptr : &dump);
      write_atomically(output, [&](std::ostream& out) { write_tracks(out, result.detections); });
      if (!dump_path.empty()) {
        write_atomically(dump_path, [&](std::ostream& out) { out << dump.str(); });
      }
      if (!quiet) write_summary(std::cout, result.summary);
    } else if (*eval_cmd) {
      const auto gt = load_tracks(gt_path);
      const auto pred = load_tracks(pred_path);
      const auto report = evaluate(sequence, gt, pred, match_iou);
      write_report(std::cout, report);
      if (!csv_path.empty()) {
        const bool fresh = !fs::exists(csv_path);
        std::ofstream csv(csv_path, std::ios::app);
        if (!csv) throw std::runtime_error("cannot write " + csv_path);
        if (fresh) write_report_header(csv);
        write_report_row(csv, report);
      }
    } else if (*synth_cmd) {
      SynthConfig cfg;
      if (!synth_config.empty()) {
        auto in = open_input(synth_config);
        try {
          cfg = read_synth_config(in);
        } catch (const ParseError& e) {
          throw std::runtime_error(synth_config + ": " + e.what());
        }
      }
      const auto seq = generate(cfg.scenario);
      const auto corrupted = corrupt(seq, cfg.corruption);
      const fs::path dir(out_dir);
      write_atomically(dir / "gt.txt", [&](std::ostream& out) { write_tracks(out, seq.gt); });
      write_atomically(dir / "tracker.txt",
                       [&](std::ostream& out) { write_tracks(out, corrupted.detections); });
      write_atomically(dir / "seqinfo.ini",
                       [&](std::ostream& out) { write_seqinfo(out, seq.meta, dir.filename().string()); });
      write_atomically(dir / "corruption_log.tsv",
                       [&](std::ostream& out) { write_corruption_log(out, corrupted.log); });
      std::cout << "gt_detections=" << seq.gt.size() << '\n'
                << "tracker_detections=" << corrupted.detections.size() << '\n'
                << "corruption_events=" << corrupted.log.size() << '\n';
    } else if (*defaults_cmd) {
      write_pipeline_config(std::cout, PipelineConfig{});
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
