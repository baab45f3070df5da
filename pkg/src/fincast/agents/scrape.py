"""Website-to-plain-text tool used by the support agent."""

from __future__ import annotations

import re
from html.parser import HTMLParser

import requests

from ..errors import EmptyContent, HttpStatusError, NetworkError

MAX_CHARS = 8000
TRUNCATION_MARKER = " [...truncated]"
_SKIP = {"script", "style", "noscript", "template"}
_BLOCK = {"p", "div", "br", "li", "ul", "ol", "tr", "td", "th", "table", "section",
          "article", "header", "footer", "h1", "h2", "h3", "h4", "h5", "h6", "pre", "blockquote"}
_WS = re.compile(r"\s+")


class _TextExtractor(HTMLParser):
    def __init__(self):
        super().__init__(convert_charrefs=True)
        self.parts: list[str] = []
        self._skip_depth = 0

    def handle_starttag(self, tag, attrs):
        if tag in _SKIP:
            self._skip_depth += 1
        elif tag in _BLOCK:
            self.parts.append(" ")

    def handle_endtag(self, tag):
        if tag in _SKIP:
            self._skip_depth = max(0, self._skip_depth - 1)
        elif tag in _BLOCK:
            self.parts.append(" ")

    def handle_data(self, data):
        if not self._skip_depth:
            self.parts.append(data)


def html_to_text(html: str) -> str:
    """Drop script/style blocks and every tag, then collapse whitespace."""
    parser = _TextExtractor()
    parser.feed(html)
    parser.close()
    return _WS.sub(" ", "".join(parser.parts)).strip()


def truncate(text: str, limit: int = MAX_CHARS) -> str:
    if len(text) <= limit:
        return text
    return text[:limit - len(TRUNCATION_MARKER)] + TRUNCATION_MARKER


def scrape_website(url: str, timeout: float = 30.0) -> str:
    if not url.startswith(("http://", "https://")):
        raise ValueError(f"only http(s) URLs can be scraped, got {url!r}")
    try:
        resp = requests.get(url, timeout=timeout, headers={"User-Agent": "fincast-scraper/0.1"})
    except requests.RequestException as exc:
        raise NetworkError(url, exc) from exc
    if resp.status_code != 200:
        raise HttpStatusError(resp.status_code, url)
    ctype = resp.headers.get("Content-Type", "").lower()
    body = resp.text
    if "html" in ctype or (not ctype and "<" in body):
        text = html_to_text(body)
    else:
        text = body.strip()
    if not text:
        raise EmptyContent(f"no text content at {url}")
    return truncate(text)
