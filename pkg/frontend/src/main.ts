// Browser entry point. The gateway serves this page, so the API base
// URL stays empty and every request is same-origin.

import { createApp } from "./app.js";

const root = document.getElementById("app");
if (root === null) {
    throw new Error("missing #app container");
}
createApp(root).start();
