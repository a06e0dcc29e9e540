"use strict";
// Browser entry point: mount against the engine that serves this page
// (or localhost:8080 when opened from a file).
Object.defineProperty(exports, "__esModule", { value: true });
const app_js_1 = require("./app.js");
const baseUrl = window.location.protocol.startsWith("http") && window.location.host
    ? `${window.location.protocol}//${window.location.host}`
    : "http://127.0.0.1:8080";
const app = (0, app_js_1.mountApp)(document, { baseUrl });
void app.connect();
