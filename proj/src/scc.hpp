#pragma once

#include <algorithm>
#include <vector>

namespace iddmp::detail {

/// Strongly connected components (iterative Tarjan). Returns the component id of
/// each node; components are numbered in reverse topological order, so a
/// component only has edges into components with smaller or equal ids.
template <typename Successors>
std::vector<int> strongly_connected_components(int n, Successors&& successors, int& count) {
    std::vector<int> index(n, -1), low(n, 0), comp(n, -1), stack;
    std::vector<bool> on_stack(n, false);
    struct Frame {
        int node;
        std::size_t next;
        std::vector<int> succ;
    };
    int counter = 0;
    count = 0;
    for (int root = 0; root < n; ++root) {
        if (index[root] != -1) continue;
        std::vector<Frame> frames;
        frames.push_back({root, 0, successors(root)});
        index[root] = low[root] = counter++;
        stack.push_back(root);
        on_stack[root] = true;
        while (!frames.empty()) {
            Frame& f = frames.back();
            if (f.next < f.succ.size()) {
                const int w = f.succ[f.next++];
                if (index[w] == -1) {
                    index[w] = low[w] = counter++;
                    stack.push_back(w);
                    on_stack[w] = true;
                    frames.push_back({w, 0, successors(w)});
                } else if (on_stack[w]) {
                    low[f.node] = std::min(low[f.node], index[w]);
                }
                continue;
            }
            const int v = f.node;
            if (low[v] == index[v]) {
                int w;
                do {
                    w = stack.back();
                    stack.pop_back();
                    on_stack[w] = false;
                    comp[w] = count;
                } while (w != v);
                ++count;
            }
            frames.pop_back();
            if (!frames.empty()) low[frames.back().node] = std::min(low[frames.back().node], low[v]);
        }
    }
    return comp;
}

}  // namespace iddmp::detail
