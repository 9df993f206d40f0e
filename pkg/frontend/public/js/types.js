/** Shapes of the HTTP API payloads this client consumes. */
export {};
