// Copyright 2026 The Hatex Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "hatex/heatmap.h"

#include <charconv>
#include <cmath>
#include <fstream>

namespace hatex {

namespace {

std::string Escape(const std::string& s) {
  std::string out;
  for (char ch : s) {
    switch (ch) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      case '\'': out += "&#39;"; break;
      default: out += ch;
    }
  }
  return out;
}

std::string Shortest(double v) {
  char buf[32];
  auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

}  // namespace

std::vector<double> HeatmapOpacities(const RelevanceMap& relevance) {
  double peak = 0.0;
  for (const auto& t : relevance.tokens) peak = std::max(peak, std::abs(t.score));
  std::vector<double> out;
  for (const auto& t : relevance.tokens) {
    out.push_back(peak > 0.0 ? std::abs(t.score) / peak : 0.0);
  }
  return out;
}

std::string RenderHeatmap(const Document& doc, const RelevanceMap& relevance,
                          const std::vector<std::string>& class_names) {
  if (relevance.doc_id != doc.id) {
    throw ContractError("relevance map for document '" + relevance.doc_id +
                        "' does not belong to document '" + doc.id + "'");
  }
  for (const auto& t : relevance.tokens) {
    if (t.pos < 0 || static_cast<size_t>(t.pos) >= doc.tokens.size() ||
        doc.tokens[static_cast<size_t>(t.pos)] != t.token) {
      throw ContractError("relevance map does not match the tokens of document '" +
                          doc.id + "'");
    }
  }
  const int target = relevance.target_class;
  const std::string class_name =
      target >= 0 && static_cast<size_t>(target) < class_names.size()
          ? class_names[static_cast<size_t>(target)]
          : std::to_string(target);
  const std::vector<double> alpha = HeatmapOpacities(relevance);
  std::vector<int> slot(doc.tokens.size(), -1);
  for (size_t i = 0; i < relevance.tokens.size(); ++i) {
    slot[static_cast<size_t>(relevance.tokens[i].pos)] = static_cast<int>(i);
  }

  std::string html;
  html += "<!DOCTYPE html>\n<html><head><meta charset=\"utf-8\">\n";
  html += "<title>" + Escape(doc.id) + "</title>\n";
  html += "<style>body{font-family:sans-serif;line-height:2}"
          "span.t{padding:2px 3px;margin:1px;border-radius:3px}"
          ".legend{margin-bottom:1em;color:#333}</style>\n";
  html += "</head><body>\n";
  html += "<div class=\"legend\">document " + Escape(doc.id) + " &middot; class " +
          Escape(class_name) + " &middot; method " + ToString(relevance.method) +
          " &middot; <span style=\"background:rgba(255,0,0,1)\">&nbsp;+&nbsp;</span> "
          "<span style=\"background:rgba(0,0,255,1)\">&nbsp;&minus;&nbsp;</span></div>\n";
  html += "<p>";
  for (size_t p = 0; p < doc.tokens.size(); ++p) {
    const std::string text = Escape(doc.tokens[p]);
    const int i = slot[p];
    if (i < 0 || alpha[static_cast<size_t>(i)] == 0.0) {
      html += "<span class=\"t\">" + text + "</span> ";
      continue;
    }
    const double score = relevance.tokens[static_cast<size_t>(i)].score;
    const char* rgb = score > 0 ? "255,0,0" : "0,0,255";
    html += "<span class=\"t\" title=\"" + Shortest(score) +
            "\" style=\"background:rgba(" + rgb + "," +
            Shortest(alpha[static_cast<size_t>(i)]) + ")\">" + text + "</span> ";
  }
  html += "</p>\n</body></html>\n";
  return html;
}

void WriteHeatmap(const Document& doc, const RelevanceMap& relevance,
                  const std::vector<std::string>& class_names,
                  const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write " + path);
  out << RenderHeatmap(doc, relevance, class_names);
  if (!out) throw Error("write failed: " + path);
}

}  // namespace hatex
