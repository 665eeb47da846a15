// Evaluator process for the line protocol, scoring masks with the synthetic
// oracle against the stroke truth listed in a benchmark manifest.

#include <cstdlib>
#include <iostream>
#include <map>
#include <string>

#include <unistd.h>

#include <CLI11.hpp>

#include "maskopt/benchmark.hpp"
#include "maskopt/evaluator.hpp"
#include "maskopt/image_io.hpp"

int main(int argc, char** argv) {
    CLI::App app{"Synthetic-oracle evaluator speaking the maskopt line protocol on stdin/stdout"};
    std::string manifest;
    maskopt::OracleWeights weights;
    int fail_after = -1;
    app.add_option("--manifest", manifest, "Benchmark manifest with stroke_truth entries")->required();
    app.add_option("--w-miss", weights.miss);
    app.add_option("--w-over", weights.over);
    app.add_option("--w-frag", weights.frag);
    app.add_option("--fail-after", fail_after, "Exit abruptly after answering this many requests");
    CLI11_PARSE(app, argc, argv);

    std::map<std::string, maskopt::BenchmarkItem> items;
    try {
        for (auto& item : maskopt::load_benchmark(manifest)) items.emplace(item.id, std::move(item));
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    }

    int answered = 0;
    auto channel = maskopt::fd_channel(dup(STDIN_FILENO), dup(STDOUT_FILENO));
    maskopt::serve(*channel, [&](const maskopt::protocol::Request& req) -> maskopt::protocol::Message {
        if (fail_after >= 0 && answered >= fail_after) std::_Exit(3);
        std::vector<const maskopt::BenchmarkItem*> batch;
        std::vector<maskopt::MaskBitmap> masks;
        for (const auto& pair : req.pairs) {
            const auto it = items.find(pair.id);
            if (it == items.end()) return maskopt::protocol::Error{"unknown_item", "no item '" + pair.id + "'"};
            batch.push_back(&it->second);
            masks.push_back(maskopt::load_mask(pair.mask));
        }
        std::vector<const maskopt::MaskBitmap*> mask_ptrs;
        for (const auto& m : masks) mask_ptrs.push_back(&m);
        const auto b = maskopt::synthetic_oracle(batch, mask_ptrs, weights);
        ++answered;
        maskopt::protocol::Response resp;
        resp.study = req.study;
        resp.point = req.point;
        resp.score = b.score;
        resp.diagnostics = maskopt::protocol::json{
            {"missed", b.missed}, {"over", b.over}, {"fragmentation", b.fragmentation}};
        return resp;
    });
    return 0;
}
