#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "arcline/bench.hpp"
#include "arcline/pipeline.hpp"

namespace {

using namespace arcline;

int log_level() {
    const char* env = std::getenv("ARCLINE_LOG");
    if (!env) return 1;
    const std::string v(env);
    if (v == "quiet") return 0;
    if (v == "debug") return 2;
    return 1;
}

void write_text(const std::string& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open '" + path + "' for writing");
    out << text;
    if (!out) throw std::runtime_error("write failure on '" + path + "'");
}

PrimitiveKind parse_kind(const std::string& s) {
    if (s == "segment") return PrimitiveKind::segment;
    if (s == "arc") return PrimitiveKind::arc;
    throw CLI::ValidationError("--kind", "expected 'segment' or 'arc'");
}

std::vector<double> parse_doubles(const std::string& csv) {
    std::vector<double> out;
    std::stringstream ss(csv);
    std::string item;
    while (std::getline(ss, item, ',')) {
        if (item.empty()) continue;
        out.push_back(std::stod(item));
    }
    return out;
}

struct ReconstructArgs {
    std::string input;
    std::string kind = "segment";
    std::string kind_per_contour;
    int max_scale = 10;
    std::uint64_t seed = 0;
    std::string svg_path;
    std::string json_path;
    std::string overlay = "none";
};

int cmd_reconstruct(const ReconstructArgs& args) {
    BinaryImage img = load_image(args.input);
    const std::vector<DigitalContour> contours = trace_contours(img);
    if (contours.empty()) throw std::runtime_error("trace: image has no contour");

    std::vector<PrimitiveKind> kinds(contours.size(), parse_kind(args.kind));
    if (!args.kind_per_contour.empty()) {
        std::stringstream ss(args.kind_per_contour);
        std::string item;
        std::size_t i = 0;
        while (std::getline(ss, item, ',') && i < kinds.size()) kinds[i++] = parse_kind(item);
    }

    std::vector<PipelineResult> results;
    for (std::size_t c = 0; c < contours.size(); ++c) {
        PipelineOptions options;
        options.kind = kinds[c];
        options.max_scale = args.max_scale;
        try {
            results.push_back(run_pipeline(img, contours[c], options));
        } catch (const std::exception& e) {
            throw std::runtime_error("contour " + std::to_string(c) + ", stage " + e.what());
        }
        std::cout << "contour " << c << ": " << results.back().reconstruction.primitives.size()
                  << " primitives ("
                  << (kinds[c] == PrimitiveKind::segment ? "segment" : "arc") << ")\n";
    }

    if (!args.json_path.empty()) {
        nlohmann::json all = nlohmann::json::array();
        for (const PipelineResult& r : results)
            all.push_back(nlohmann::json::parse(reconstruction_to_json(r.reconstruction)));
        write_text(args.json_path, all.dump(2) + "\n");
    }
    if (!args.svg_path.empty()) {
        // one file per contour when several are present
        for (std::size_t c = 0; c < results.size(); ++c) {
            std::string path = args.svg_path;
            if (results.size() > 1) {
                const std::size_t dotpos = path.rfind('.');
                const std::string suffix = "_" + std::to_string(c);
                if (dotpos == std::string::npos)
                    path += suffix;
                else
                    path.insert(dotpos, suffix);
            }
            SvgOverlays overlays;
            const PipelineResult& r = results[c];
            if (args.overlay == "boxes") overlays.boxes = &r.boxes;
            else if (args.overlay == "intervals") overlays.intervals = &r.sxy;
            else if (args.overlay == "maximal") overlays.maximal = &r.primitives;
            export_svg(r.reconstruction, path,
                       args.overlay == "none" ? nullptr : &overlays);
        }
    }
    return 0;
}

struct BenchArgs {
    std::string shape = "hexagon";
    std::string kind = "segment";
    std::string ladder;
    std::string angles;
    std::uint64_t seed = 1;
    std::string csv_path;
    std::string json_path;
};

int cmd_bench(const BenchArgs& args) {
    BenchShape shape;
    if (args.shape == "hexagon") shape = BenchShape::hexagon;
    else if (args.shape == "ellipse") shape = BenchShape::ellipse;
    else throw CLI::ValidationError("--shape", "expected 'hexagon' or 'ellipse'");

    NoiseLadder ladder = NoiseLadder::standard();
    if (!args.ladder.empty()) ladder.scales = parse_doubles(args.ladder);
    RotationSet rotations = RotationSet::standard();
    if (!args.angles.empty()) rotations.angles = parse_doubles(args.angles);

    const RobustnessReport report =
        run_experiment(shape, parse_kind(args.kind), ladder, rotations, args.seed);

    std::cout << "Q:";
    for (const double q : report.q_values) std::cout << " " << q;
    std::cout << "\n";
    if (report.alpha)
        std::cout << "(alpha, sigma) = (" << *report.alpha << ", " << *report.sigma << ")\n";
    else
        std::cout << "(alpha, sigma) = n/a (single scale)\n";
    std::cout << "reference table:\n";
    for (const ReferenceEntry& e : reference_table(report.kind))
        std::cout << "  " << e.method << ": (" << e.alpha << ", " << e.sigma << ")\n";

    if (!args.csv_path.empty()) write_text(args.csv_path, report_to_csv(report));
    if (!args.json_path.empty()) write_text(args.json_path, report_to_json(report) + "\n");
    return 0;
}

struct InspectArgs {
    std::string input;
    std::string stage = "boxes";
    std::string kind = "segment";
    int max_scale = 10;
    int contour_index = 0;
    std::string json_path;
};

int cmd_inspect(const InspectArgs& args) {
    if (args.stage != "boxes" && args.stage != "sxy" && args.stage != "maximal" &&
        args.stage != "cycle")
        throw CLI::ValidationError("--stage", "unknown stage '" + args.stage + "'");

    BinaryImage img = load_image(args.input);
    const std::vector<DigitalContour> contours = trace_contours(img);
    if (args.contour_index < 0 || static_cast<std::size_t>(args.contour_index) >= contours.size())
        throw std::runtime_error("contour index out of range");
    const DigitalContour& contour = contours[args.contour_index];

    PipelineOptions options;
    options.kind = parse_kind(args.kind);
    options.max_scale = args.max_scale;

    std::string text;
    if (args.stage == "boxes") {
        text = boxes_to_json(meaningful_boxes(contour, options.max_scale));
    } else {
        const PipelineResult r = run_pipeline(img, contour, options);
        if (args.stage == "sxy") text = sxy_to_json(r.sxy);
        else if (args.stage == "maximal") text = primitives_to_json(r.primitives);
        else text = cycle_to_json(r.cycle);
    }
    if (!args.json_path.empty())
        write_text(args.json_path, text + "\n");
    else
        std::cout << text << "\n";
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"arcline: reconstruction of noisy digital contours into minimal "
                 "cyclic chains of line segments or circular arcs"};
    app.require_subcommand(1);

    ReconstructArgs rargs;
    CLI::App* rec = app.add_subcommand("reconstruct", "run the full pipeline on an image");
    rec->add_option("--input", rargs.input, "PBM/PGM input image")->required();
    rec->add_option("--kind", rargs.kind, "primitive kind: segment|arc");
    rec->add_option("--kind-per-contour", rargs.kind_per_contour,
                    "comma-separated kinds in contour discovery order");
    rec->add_option("--max-scale", rargs.max_scale, "largest subsampling scale")
        ->check(CLI::Range(2, 64));
    rec->add_option("--seed", rargs.seed, "seed (accepted for interface stability)");
    rec->add_option("--svg", rargs.svg_path, "SVG output path");
    rec->add_option("--json", rargs.json_path, "JSON output path");
    rec->add_option("--overlay", rargs.overlay, "SVG overlay: boxes|intervals|maximal|none");

    BenchArgs bargs;
    CLI::App* ben = app.add_subcommand("bench", "robustness experiment");
    ben->add_option("--shape", bargs.shape, "hexagon|ellipse");
    ben->add_option("--kind", bargs.kind, "segment|arc");
    ben->add_option("--ladder", bargs.ladder, "comma-separated noise scales");
    ben->add_option("--angles", bargs.angles, "comma-separated rotation angles (radians)");
    ben->add_option("--seed", bargs.seed, "experiment seed");
    ben->add_option("--csv", bargs.csv_path, "CSV report path");
    ben->add_option("--json", bargs.json_path, "JSON report path");

    InspectArgs iargs;
    CLI::App* ins = app.add_subcommand("inspect", "dump an intermediate stage as JSON");
    ins->add_option("--input", iargs.input, "PBM/PGM input image")->required();
    ins->add_option("--stage", iargs.stage, "boxes|sxy|maximal|cycle");
    ins->add_option("--kind", iargs.kind, "segment|arc");
    ins->add_option("--max-scale", iargs.max_scale, "largest subsampling scale");
    ins->add_option("--contour", iargs.contour_index, "contour index (discovery order)");
    ins->add_option("--json", iargs.json_path, "output path (stdout when omitted)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    try {
        if (rec->parsed()) return cmd_reconstruct(rargs);
        if (ben->parsed()) return cmd_bench(bargs);
        if (ins->parsed()) return cmd_inspect(iargs);
    } catch (const CLI::ValidationError& e) {
        std::cerr << "usage error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        if (log_level() > 0) std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 2;
}
